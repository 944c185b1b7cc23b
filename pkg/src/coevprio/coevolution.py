"""Two-population competitive coevolution of arrival sequences and priority assignments."""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import arrivals_ga, nsga
from .fitness import Evaluator
from .model import (
    ArrivalSequence,
    ModelError,
    PriorityAssignment,
    TaskSet,
    check_taskset,
    default_horizon,
    fixed_gap_sequence,
    random_arrival_sequence,
)


class ConfigError(ValueError):
    pass


@dataclass
class CoevolutionConfig:
    n_c: int = 1000
    ps_a: int = 10
    ps_p: int = 10
    cp_a: float = 0.8
    cp_p: float = 0.8
    mp_a: float | None = None  # None: 1 / number of tasks
    mp_p: float | None = None
    horizon: int | None = None  # None: default_horizon(task set)
    external_set_size: int = 10
    external_batch: int = 10
    external_seed: int = 0
    seed: int = 0
    steps_per_cycle: int = 1
    jobs: int = 1
    record_history: bool = True

    def validate(self) -> None:
        for name in ("ps_a", "ps_p"):
            if getattr(self, name) < 2:
                raise ConfigError(f"{name} must be >= 2")
        for name in ("cp_a", "cp_p", "mp_a", "mp_p"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")
        if self.n_c < 0:
            raise ConfigError("n_c must be >= 0")
        if self.horizon is not None and self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if self.external_set_size < 1 or self.external_batch < 1:
            raise ConfigError("external_set_size and external_batch must be >= 1")
        if self.steps_per_cycle < 1:
            raise ConfigError("steps_per_cycle must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    def resolved(self, ts: TaskSet) -> CoevolutionConfig:
        self.validate()
        cfg = CoevolutionConfig(**asdict(self))
        if cfg.mp_a is None:
            cfg.mp_a = 1.0 / ts.n
        if cfg.mp_p is None:
            cfg.mp_p = 1.0 / ts.n
        if cfg.horizon is None:
            cfg.horizon = default_horizon(ts)
        return cfg


@dataclass(frozen=True)
class FrontMember:
    assignment: PriorityAssignment
    fs: float
    fc: float

    @property
    def objectives(self) -> tuple[float, float]:
        return (self.fs, self.fc)


@dataclass
class BestFront:
    members: list[FrontMember]
    method: str = "opam"
    history: list[list[tuple[float, float]]] = field(default_factory=list)
    log: list[dict] = field(default_factory=list)
    external: list[ArrivalSequence] = field(default_factory=list)
    invocations: int = 0
    meta: dict = field(default_factory=dict)

    def points(self) -> list[tuple[float, float]]:
        return [m.objectives for m in self.members]


# ---------------------------------------------------------------- external set


def arrival_vector(ts: TaskSet, A: ArrivalSequence) -> np.ndarray:
    """Fixed-length embedding: per aperiodic task, arrivals padded with T up to ceil(T / pmin)."""
    T = A.horizon
    parts = []
    for j in ts.free_aperiodic_ids:
        length = math.ceil(T / ts.tasks[j].pmin)
        lst = list(A.arrivals[j][:length])
        lst += [T] * (length - len(lst))
        parts.append(np.asarray(lst, dtype=float))
    return np.concatenate(parts) if parts else np.zeros(0)


@dataclass
class CandidateBatch:
    candidates: list[ArrivalSequence]
    min_distances: list[float]
    accepted: int


def generate_external_set(
    ts: TaskSet,
    size: int,
    T: int,
    rng: random.Random,
    batch: int = 10,
    record: list[CandidateBatch] | None = None,
) -> list[ArrivalSequence]:
    """Max-gap and min-gap sequences, then adaptive random sampling maximising the minimum distance."""
    E = [fixed_gap_sequence(ts, T, "max")]
    if size >= 2:
        E.append(fixed_gap_sequence(ts, T, "min"))
    vecs = [arrival_vector(ts, e) for e in E]
    while len(E) < size:
        cands = [random_arrival_sequence(ts, T, rng) for _ in range(batch)]
        dists = []
        for c in cands:
            v = arrival_vector(ts, c)
            dists.append(min(float(np.linalg.norm(v - u)) for u in vecs))
        best = max(range(batch), key=lambda i: (dists[i], -i))
        E.append(cands[best])
        vecs.append(arrival_vector(ts, cands[best]))
        if record is not None:
            record.append(CandidateBatch(cands, dists, best))
    return E[:size]


# ---------------------------------------------------------------- best front


def update_best(members: Sequence[FrontMember], size: int) -> list[FrontMember]:
    """First non-dominated front of ``members`` (deduplicated by assignment), crowding-cut to ``size``."""
    seen: dict[tuple[int, ...], FrontMember] = {}
    for m in members:
        seen.setdefault(m.assignment.priority, m)
    pool = list(seen.values())
    points = [m.objectives for m in pool]
    front = nsga.non_dominated_sort(points)[0] if pool else []
    if len(front) > size:
        sub = [points[i] for i in front]
        front = [front[k] for k in nsga.select_indices(sub, size)]
    best = [pool[i] for i in front]
    best.sort(key=lambda m: (-m.fs, -m.fc, m.assignment.priority))
    return best


def evaluate_external(
    ev: Evaluator, priorities: Sequence[PriorityAssignment], E: Sequence[ArrivalSequence]
) -> list[FrontMember]:
    return [FrontMember(P, s, c) for P, (s, c) in zip(priorities, ev.objectives(priorities, E))]


# ---------------------------------------------------------------- driver


class SearchState:
    """Shared bookkeeping for the coevolution driver and the baselines."""

    def __init__(
        self,
        ts: TaskSet,
        config: CoevolutionConfig,
        method: str,
        external: Sequence[ArrivalSequence] | None,
    ) -> None:
        check_taskset(ts)
        self.ts = ts
        self.cfg = config.resolved(ts)
        self.T = self.cfg.horizon
        self.method = method
        self.rng = random.Random(self.cfg.seed)
        self.ev = Evaluator(ts, self.T, jobs=self.cfg.jobs)
        if external is None:
            external = generate_external_set(
                ts, self.cfg.external_set_size, self.T,
                random.Random(self.cfg.external_seed), self.cfg.external_batch,
            )
        for e in external:
            if e.horizon != self.T or len(e.arrivals) != ts.n:
                raise ModelError("external arrival sequences must match the task set and horizon")
        self.E = list(external)
        self.best: list[FrontMember] = []
        self.history: list[list[tuple[float, float]]] = []
        self.log: list[dict] = []
        self.started = time.perf_counter()

    def random_arrivals(self, k: int) -> list[ArrivalSequence]:
        return [random_arrival_sequence(self.ts, self.T, self.rng) for _ in range(k)]

    def random_priorities(self, k: int) -> list[PriorityAssignment]:
        return [PriorityAssignment.random(self.ts.n, self.rng) for _ in range(k)]

    def absorb(self, priorities: Sequence[PriorityAssignment], cycle: int) -> None:
        ext = evaluate_external(self.ev, priorities, self.E)
        self.best = update_best(list(self.best) + ext, self.cfg.ps_p)
        if self.cfg.record_history:
            self.history.append([m.objectives for m in self.best])
        self.log.append(
            {
                "cycle": cycle,
                "best_fs": max(m.fs for m in self.best),
                "best_fc": max(m.fc for m in self.best),
                "front_size": len(self.best),
                "invocations": self.ev.invocations,
                "wall_time": time.perf_counter() - self.started,
            }
        )

    def result(self) -> BestFront:
        self.ev.close()
        return BestFront(
            members=list(self.best),
            method=self.method,
            history=self.history,
            log=self.log,
            external=self.E,
            invocations=self.ev.invocations,
        )


def evolve_priorities(
    state: SearchState,
    priorities: list[PriorityAssignment],
    arrivals: Sequence[ArrivalSequence],
) -> list[PriorityAssignment]:
    """One NSGA-II generation against a fixed arrival population."""
    cfg, ev, rng = state.cfg, state.ev, state.rng
    ranked = nsga.rank_population(priorities, ev.objectives(priorities, arrivals))
    offspring = nsga.breed(ranked, cfg.ps_p, cfg.cp_p, cfg.mp_p, rng)
    union = priorities + offspring
    objs = [r.objectives for r in ranked] + ev.objectives(offspring, arrivals)
    return [union[i] for i in nsga.select_indices(objs, cfg.ps_p)]


def run(
    ts: TaskSet,
    config: CoevolutionConfig | None = None,
    *,
    external: Sequence[ArrivalSequence] | None = None,
    initial: PriorityAssignment | None = None,
    on_cycle: Callable[[int, SearchState], None] | None = None,
) -> BestFront:
    """Coevolve arrival sequences and priority assignments; return the best external front."""
    state = SearchState(ts, config or CoevolutionConfig(), "opam", external)
    cfg, ev, rng = state.cfg, state.ev, state.rng

    A = arrivals_ga.ArrivalPopulation(state.random_arrivals(cfg.ps_a))
    P = state.random_priorities(cfg.ps_p)
    if initial is not None:
        if len(initial) != ts.n or not initial.is_permutation():
            raise ModelError("initial priority assignment is not a permutation")
        P[0] = initial
    evolve_arrivals = bool(ts.free_aperiodic_ids)
    state.absorb(P, 0)

    for cycle in range(1, cfg.n_c + 1):
        if evolve_arrivals:
            A.refresh(ev, P)
            for _ in range(cfg.steps_per_cycle):
                arrivals_ga.step(ts, A, P, ev, cfg.cp_a, cfg.mp_a, rng)
        P = evolve_priorities(state, P, A.members)
        state.absorb(P, cycle)
        if on_cycle is not None:
            on_cycle(cycle, state)
    return state.result()
