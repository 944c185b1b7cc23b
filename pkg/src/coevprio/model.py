"""Static system model: tasks, task sets, priority assignments, arrival sequences."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

PERIODIC = "periodic"
APERIODIC = "aperiodic"
HARD = "hard"
SOFT = "soft"


class ModelError(ValueError):
    """Raised when an object violates the system model."""


@dataclass(frozen=True)
class Task:
    """A real-time task. All times are integer ticks.

    For periodic tasks ``pmin`` and ``pmax`` are filled in with ``period``
    when omitted. Aperiodic tasks carry no period or offset.
    """

    id: int
    kind: str
    wcet: int
    deadline: int
    period: int | None = None
    offset: int = 0
    pmin: int | None = None
    pmax: int | None = None
    deadline_class: str = HARD
    triggered: bool = False

    def __post_init__(self) -> None:
        if self.kind == PERIODIC and self.period is not None:
            if self.pmin is None:
                object.__setattr__(self, "pmin", self.period)
            if self.pmax is None:
                object.__setattr__(self, "pmax", self.period)

    @property
    def is_periodic(self) -> bool:
        return self.kind == PERIODIC

    @property
    def is_aperiodic(self) -> bool:
        return self.kind == APERIODIC


@dataclass(frozen=True)
class TaskSet:
    tasks: tuple[Task, ...]
    cores: int = 1
    dependencies: frozenset[frozenset[int]] = frozenset()
    triggers: frozenset[tuple[int, int]] = frozenset()
    tick_unit: str = "1 ms"

    def __post_init__(self) -> None:
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(
            self, "dependencies", frozenset(frozenset(p) for p in self.dependencies)
        )
        object.__setattr__(self, "triggers", frozenset(tuple(p) for p in self.triggers))

    @property
    def n(self) -> int:
        return len(self.tasks)

    def __len__(self) -> int:
        return len(self.tasks)

    @cached_property
    def periodic_ids(self) -> tuple[int, ...]:
        return tuple(t.id for t in self.tasks if t.is_periodic)

    @cached_property
    def aperiodic_ids(self) -> tuple[int, ...]:
        return tuple(t.id for t in self.tasks if t.is_aperiodic)

    @cached_property
    def free_aperiodic_ids(self) -> tuple[int, ...]:
        """Aperiodic tasks with their own (non-triggered) arrivals."""
        return tuple(t.id for t in self.tasks if t.is_aperiodic and not t.triggered)


@dataclass(frozen=True)
class PriorityAssignment:
    """``priority[j]`` is the priority of task ``j``; larger means higher."""

    priority: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "priority", tuple(int(p) for p in self.priority))

    def __len__(self) -> int:
        return len(self.priority)

    def __getitem__(self, task_id: int) -> int:
        return self.priority[task_id]

    def is_permutation(self) -> bool:
        return sorted(self.priority) == list(range(1, len(self.priority) + 1))

    @classmethod
    def from_order(cls, order: Sequence[int]) -> PriorityAssignment:
        """Build from task ids listed highest priority first."""
        n = len(order)
        prio = [0] * n
        for rank, tid in enumerate(order):
            prio[tid] = n - rank
        return cls(tuple(prio))

    @classmethod
    def random(cls, n: int, rng: random.Random) -> PriorityAssignment:
        values = list(range(1, n + 1))
        rng.shuffle(values)
        return cls(tuple(values))


@dataclass(frozen=True, eq=True)
class ArrivalSequence:
    """Arrival times per task id over the horizon ``[0, horizon]``."""

    arrivals: tuple[tuple[int, ...], ...]
    horizon: int

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "arrivals", tuple(tuple(int(a) for a in lst) for lst in self.arrivals)
        )

    @cached_property
    def _hash(self) -> int:
        return hash((self.arrivals, self.horizon))

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return sum(len(a) for a in self.arrivals)

    def replace(self, task_id: int, times: Iterable[int]) -> ArrivalSequence:
        lists = list(self.arrivals)
        lists[task_id] = tuple(times)
        return ArrivalSequence(tuple(lists), self.horizon)

    @cached_property
    def flat(self) -> tuple[np.ndarray, np.ndarray]:
        """Arrivals flattened and sorted by (time, task id)."""
        pairs = sorted((a, j) for j, lst in enumerate(self.arrivals) for a in lst)
        times = np.fromiter((p[0] for p in pairs), dtype=np.int64, count=len(pairs))
        tasks = np.fromiter((p[1] for p in pairs), dtype=np.int64, count=len(pairs))
        return times, tasks


@dataclass
class Execution:
    """One job in a schedule scenario."""

    task: int
    arrival: int
    end: int
    deadline_abs: int
    complete: bool = True

    @property
    def dist(self) -> int:
        return self.end - self.deadline_abs


@dataclass
class ScheduleScenario:
    executions: list[Execution] = field(default_factory=list)
    horizon: int = 0

    def __len__(self) -> int:
        return len(self.executions)

    def __iter__(self):
        return iter(self.executions)

    def tuples(self) -> list[tuple[int, int, int]]:
        return [(e.task, e.arrival, e.end) for e in self.executions]

    def key(self) -> tuple:
        return tuple(
            (e.task, e.arrival, e.end, e.deadline_abs, e.complete) for e in self.executions
        )


# ---------------------------------------------------------------- validation


def _trigger_cycles(n: int, triggers: Iterable[tuple[int, int]]) -> list[list[int]]:
    succ: dict[int, list[int]] = {}
    for a, b in triggers:
        succ.setdefault(a, []).append(b)
    color = [0] * n
    cycles: list[list[int]] = []

    def visit(u: int, path: list[int]) -> None:
        color[u] = 1
        path.append(u)
        for v in sorted(succ.get(u, ())):
            if color[v] == 1:
                cycles.append(path[path.index(v):] + [v])
            elif color[v] == 0:
                visit(v, path)
        path.pop()
        color[u] = 2

    for u in range(n):
        if color[u] == 0:
            visit(u, [])
    return cycles


def validate_taskset(ts: TaskSet) -> list[str]:
    """Return every model violation found in ``ts``; an empty list means valid."""
    out: list[str] = []
    n = len(ts.tasks)
    if not isinstance(ts.cores, int) or ts.cores < 1:
        out.append(f"cores must be a positive integer, got {ts.cores!r}")
    for idx, t in enumerate(ts.tasks):
        where = f"task {t.id}"
        if t.id != idx:
            out.append(f"{where}: id must equal its position {idx}")
        if t.kind not in (PERIODIC, APERIODIC):
            out.append(f"{where}: kind must be 'periodic' or 'aperiodic', got {t.kind!r}")
            continue
        if t.deadline_class not in (HARD, SOFT):
            out.append(f"{where}: deadline_class must be 'hard' or 'soft'")
        if t.wcet < 1:
            out.append(f"{where}: wcet must be >= 1")
        if t.deadline < 1:
            out.append(f"{where}: deadline must be >= 1")
        if t.is_periodic:
            if t.period is None or t.period < 1:
                out.append(f"{where}: period must be >= 1")
            elif t.pmin != t.period or t.pmax != t.period:
                out.append(f"{where}: periodic task must have pmin = pmax = period")
            if t.offset < 0:
                out.append(f"{where}: offset must be >= 0")
            if t.triggered:
                out.append(f"{where}: triggered task cannot be periodic")
        else:
            if t.period is not None:
                out.append(f"{where}: aperiodic task must not have a period")
            if t.offset != 0:
                out.append(f"{where}: aperiodic task must not have an offset")
            if t.pmin is None or t.pmax is None:
                out.append(f"{where}: aperiodic task needs pmin and pmax")
            elif t.pmin < 1:
                out.append(f"{where}: pmin must be >= 1")
            elif t.pmax <= t.pmin:
                out.append(f"{where}: pmax must exceed pmin")
    for pair in sorted(tuple(sorted(p)) for p in ts.dependencies):
        if len(pair) != 2:
            out.append(f"dependency {list(pair)}: a task cannot depend on itself")
            continue
        if any(not (0 <= x < n) for x in pair):
            out.append(f"dependency {list(pair)}: unknown task id")
    sources: dict[int, list[int]] = {}
    for a, b in sorted(ts.triggers):
        if not (0 <= a < n and 0 <= b < n):
            out.append(f"trigger ({a}, {b}): unknown task id")
            continue
        if a == b:
            out.append(f"trigger ({a}, {b}): circular triggering")
            continue
        sources.setdefault(b, []).append(a)
    for b, srcs in sorted(sources.items()):
        if len(srcs) > 1:
            out.append(f"task {b}: triggered by more than one task {srcs}")
    valid_triggers = [(a, b) for a, b in ts.triggers if 0 <= a < n and 0 <= b < n and a != b]
    for cyc in _trigger_cycles(n, valid_triggers):
        out.append(f"circular triggering: {' -> '.join(map(str, cyc))}")
    for t in ts.tasks:
        if 0 <= t.id < n and t.triggered != (t.id in sources):
            if t.triggered:
                out.append(f"task {t.id}: marked triggered but no task triggers it")
            else:
                out.append(f"task {t.id}: triggered by {sources[t.id]} but not marked triggered")
    return out


def check_taskset(ts: TaskSet) -> TaskSet:
    errors = validate_taskset(ts)
    if errors:
        raise ModelError("invalid task set: " + "; ".join(errors))
    return ts


def validate_arrivals(ts: TaskSet, seq: ArrivalSequence) -> list[str]:
    """Check ``seq`` against the arrival rules of ``ts`` (including maximality)."""
    out: list[str] = []
    T = seq.horizon
    if len(seq.arrivals) != ts.n:
        return [f"arrival sequence has {len(seq.arrivals)} task lists, expected {ts.n}"]
    for t in ts.tasks:
        lst = seq.arrivals[t.id]
        where = f"task {t.id}"
        if t.triggered:
            if lst:
                out.append(f"{where}: triggered task must have no autonomous arrivals")
            continue
        if t.is_periodic:
            if list(lst) != periodic_arrivals(t, T):
                out.append(f"{where}: periodic arrivals do not follow offset + k*period")
            continue
        prev = 0
        for k, a in enumerate(lst):
            if a > T:
                out.append(f"{where}: arrival {a} beyond horizon {T}")
                break
            gap = a - prev
            if not (t.pmin <= gap <= t.pmax):
                out.append(f"{where}: arrival #{k + 1} at {a} breaks gap range [{t.pmin}, {t.pmax}]")
                break
            prev = a
        else:
            if prev + t.pmax <= T:
                out.append(f"{where}: sequence stops early; another arrival must occur by {prev + t.pmax}")
    return out


def check_arrivals(ts: TaskSet, seq: ArrivalSequence) -> ArrivalSequence:
    errors = validate_arrivals(ts, seq)
    if errors:
        raise ModelError("invalid arrival sequence: " + "; ".join(errors))
    return seq


# ---------------------------------------------------------------- arrivals


def periodic_arrivals(task: Task, T: int) -> list[int]:
    if not task.is_periodic:
        raise ModelError(f"task {task.id} is not periodic")
    if task.triggered:
        raise ModelError(f"task {task.id} is triggered and has no autonomous arrivals")
    if task.offset > T:
        return []
    return list(range(task.offset, T + 1, task.period))


def fill_gaps(start: list[int], pmin: int, pmax: int, T: int, gap) -> list[int]:
    """Extend ``start`` with arrivals ``last + gap()`` while they fit in ``[0, T]``.

    ``gap`` is called with no arguments and must return a value in ``[pmin, pmax]``.
    """
    out = list(start)
    last = out[-1] if out else 0
    while True:
        nxt = last + gap()
        if nxt > T:
            return out
        out.append(nxt)
        last = nxt


def aperiodic_arrivals(task: Task, T: int, rng: random.Random) -> list[int]:
    return fill_gaps([], task.pmin, task.pmax, T, lambda: rng.randint(task.pmin, task.pmax))


def _build(ts: TaskSet, T: int, aperiodic) -> ArrivalSequence:
    lists = []
    for t in ts.tasks:
        if t.triggered:
            lists.append(())
        elif t.is_periodic:
            lists.append(tuple(periodic_arrivals(t, T)))
        else:
            lists.append(tuple(aperiodic(t)))
    return ArrivalSequence(tuple(lists), T)


def random_arrival_sequence(ts: TaskSet, T: int, rng: random.Random) -> ArrivalSequence:
    """Periodic arrivals per formula; aperiodic gaps drawn uniformly from [pmin, pmax]."""
    return _build(ts, T, lambda t: aperiodic_arrivals(t, T, rng))


def fixed_gap_sequence(ts: TaskSet, T: int, which: str) -> ArrivalSequence:
    """Every aperiodic task arrives at its maximum (``"max"``) or minimum (``"min"``) gap."""
    pick = {"max": lambda t: t.pmax, "min": lambda t: t.pmin}[which]
    return _build(ts, T, lambda t: fill_gaps([], t.pmin, t.pmax, T, lambda: pick(t)))


def default_horizon(ts: TaskSet) -> int:
    """max(LCM of periodic periods, largest aperiodic pmax)."""
    periods = [t.period for t in ts.tasks if t.is_periodic and not t.triggered]
    lcm = math.lcm(*periods) if periods else 0
    pmax = max((t.pmax for t in ts.tasks if t.is_aperiodic), default=0)
    return max(lcm, pmax, 1)
