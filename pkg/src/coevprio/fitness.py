"""Deadline-miss, safety-margin and constraint fitness functions."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import scheduler
from .model import ArrivalSequence, Execution, PriorityAssignment, TaskSet

DIST_CLAMP = 1022


def dist(record: Execution) -> int:
    """Signed distance from the absolute deadline to the end; negative means met."""
    return record.end - record.deadline_abs


def pow2_dist(d: int) -> float:
    return math.ldexp(1.0, max(-DIST_CLAMP, min(DIST_CLAMP, d)))


def fd_of_scenario(scenario) -> float:
    total = 0.0
    for e in scenario:
        total += pow2_dist(dist(e))
    return total


def fd(ts: TaskSet, A: ArrivalSequence, P: PriorityAssignment, T: int | None = None) -> float:
    """Deadline-miss magnitude: sum of 2**dist over every job of the simulated scenario."""
    return fd_of_scenario(scheduler.simulate(ts, A, P, T))


def fs(ts: TaskSet, P: PriorityAssignment, A: ArrivalSequence, T: int | None = None) -> float:
    """Safety-margin magnitude; exactly the negated deadline-miss value."""
    return -fd(ts, A, P, T)


def fc(ts: TaskSet, P: PriorityAssignment) -> int:
    """Constraint satisfaction: sum over aperiodic tasks of (lowest periodic priority - own priority)."""
    periodic = ts.periodic_ids
    if not periodic:
        return 0
    lp = min(P[j] for j in periodic)
    return sum(lp - P[j] for j in ts.aperiodic_ids)


class Evaluator:
    """Cached pairwise fitness over one task set and horizon.

    Pairwise results are memoised by (arrival sequence, priority tuple), since
    the coevolving populations keep most members from cycle to cycle.
    ``invocations`` counts actual simulator runs (cache misses).
    """

    def __init__(self, ts: TaskSet, T: int, *, jobs: int = 1, cache: bool = True) -> None:
        self.ts = ts
        self.T = T
        self.ctx = scheduler.context_for(ts)
        self.jobs = max(1, int(jobs))
        self.cache: dict[tuple[ArrivalSequence, tuple[int, ...]], float] | None = {} if cache else None
        self.invocations = 0
        self._pool: ThreadPoolExecutor | None = None

    def _simulate_fd(self, A: ArrivalSequence, prio: tuple[int, ...]) -> float:
        times, tasks = A.flat
        return scheduler.kernel.fd(self.ctx, times, tasks, prio, self.T)

    def pairwise(self, pairs: Sequence[tuple[ArrivalSequence, PriorityAssignment]]) -> list[float]:
        """fd(A, P) for every pair, in input order."""
        keys = [(A, P.priority) for A, P in pairs]
        store = self.cache if self.cache is not None else {}
        todo = [k for k in dict.fromkeys(keys) if k not in store]
        if todo:
            if self.jobs > 1 and len(todo) > 1:
                if self._pool is None:
                    self._pool = ThreadPoolExecutor(max_workers=self.jobs)
                values = list(self._pool.map(lambda k: self._simulate_fd(*k), todo))
            else:
                values = [self._simulate_fd(*k) for k in todo]
            self.invocations += len(todo)
            store.update(zip(todo, values))
        return [store[k] for k in keys]

    def fd(self, A: ArrivalSequence, P: PriorityAssignment) -> float:
        return self.pairwise([(A, P)])[0]

    def fs(self, P: PriorityAssignment, A: ArrivalSequence) -> float:
        return -self.fd(A, P)

    def fc(self, P: PriorityAssignment) -> int:
        return fc(self.ts, P)

    def internal_fd(
        self, arrivals: Sequence[ArrivalSequence], priorities: Sequence[PriorityAssignment]
    ) -> list[float]:
        """Mean fd of each arrival sequence against the whole priority population."""
        grid = self.pairwise([(A, P) for A in arrivals for P in priorities])
        k = len(priorities)
        return [_mean(grid[i * k:(i + 1) * k]) for i in range(len(arrivals))]

    def internal_fs(
        self, priorities: Sequence[PriorityAssignment], arrivals: Sequence[ArrivalSequence]
    ) -> list[float]:
        """Mean fs of each priority assignment against the whole arrival population."""
        grid = self.pairwise([(A, P) for P in priorities for A in arrivals])
        k = len(arrivals)
        return [-_mean(grid[i * k:(i + 1) * k]) for i in range(len(priorities))]

    def objectives(
        self, priorities: Sequence[PriorityAssignment], arrivals: Sequence[ArrivalSequence]
    ) -> list[tuple[float, float]]:
        """(fs, fc) of each priority assignment against ``arrivals``."""
        fs_values = self.internal_fs(priorities, arrivals)
        return [(s, float(self.fc(P))) for s, P in zip(fs_values, priorities)]

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None


def _mean(values: Iterable[float]) -> float:
    total = 0.0
    count = 0
    for v in values:
        total += v
        count += 1
    return total / count


def internal_fd(
    ts: TaskSet, A: ArrivalSequence, priorities: Sequence[PriorityAssignment], T: int
) -> float:
    return Evaluator(ts, T).internal_fd([A], priorities)[0]


def internal_fs(
    ts: TaskSet, P: PriorityAssignment, arrivals: Sequence[ArrivalSequence], T: int
) -> float:
    return Evaluator(ts, T).internal_fs([P], arrivals)[0]


@dataclass(frozen=True)
class ExternalFitness:
    fs: float
    fc: float


def external_eval(
    ts: TaskSet,
    priorities: Sequence[PriorityAssignment],
    external: Sequence[ArrivalSequence],
    T: int,
    evaluator: Evaluator | None = None,
) -> list[ExternalFitness]:
    """Safety margin averaged over the fixed set ``external`` plus the constraint value, per assignment."""
    ev = evaluator or Evaluator(ts, T)
    return [ExternalFitness(s, c) for s, c in ev.objectives(priorities, external)]
