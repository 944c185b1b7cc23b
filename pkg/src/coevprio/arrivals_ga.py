"""Steady-state GA that evolves arrival sequences towards larger deadline misses."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .fitness import Evaluator
from .model import ArrivalSequence, PriorityAssignment, TaskSet, fill_gaps


@dataclass
class ArrivalPopulation:
    members: list[ArrivalSequence]
    fitness: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)

    def refresh(self, ev: Evaluator, priorities: Sequence[PriorityAssignment]) -> None:
        self.fitness = ev.internal_fd(self.members, priorities)

    def best(self) -> float:
        return max(self.fitness)

    def worst_index(self) -> int:
        return min(range(len(self.fitness)), key=lambda i: (self.fitness[i], i))


def tournament_select(
    pop: ArrivalPopulation, rng: random.Random
) -> tuple[ArrivalSequence, ArrivalSequence]:
    """Two binary tournaments; each returns the fitter of two uniformly drawn members."""

    def one() -> ArrivalSequence:
        a = rng.randrange(len(pop))
        b = rng.randrange(len(pop))
        return pop.members[b] if pop.fitness[b] > pop.fitness[a] else pop.members[a]

    return one(), one()


def crossover_arrivals(
    ts: TaskSet,
    Ap: ArrivalSequence,
    Aq: ArrivalSequence,
    cp: float,
    rng: random.Random,
) -> tuple[ArrivalSequence, ArrivalSequence]:
    """Swap the whole arrival lists of tasks 0..r, with r a random aperiodic task id."""
    candidates = ts.free_aperiodic_ids
    if not candidates or rng.random() >= cp:
        return Ap, Aq
    r = rng.choice(candidates)
    p, q = list(Ap.arrivals), list(Aq.arrivals)
    for i in range(r + 1):
        p[i], q[i] = q[i], p[i]
    return ArrivalSequence(tuple(p), Ap.horizon), ArrivalSequence(tuple(q), Aq.horizon)


def mutate_task_arrivals(
    times: Sequence[int], pmin: int, pmax: int, T: int, mp: float, rng: random.Random
) -> list[int]:
    out = list(times)
    k = 0
    while k < len(out):
        if rng.random() >= mp:
            k += 1
            continue
        prev = out[k - 1] if k > 0 else 0
        o = out[k]
        d = rng.randint(prev + pmin, prev + pmax)
        out[k] = d
        if k + 1 < len(out) and d + pmin <= out[k + 1] <= d + pmax:
            k += 1
            continue
        # repair: shift the tail, drop what left the horizon, refill the end
        out = out[: k + 1] + [a + (d - o) for a in out[k + 1:]]
        out = [a for a in out if a <= T]
        out = fill_gaps(out, pmin, pmax, T, lambda: rng.randint(pmin, pmax))
        k += 1
    return out


def mutate_arrivals(
    ts: TaskSet, A: ArrivalSequence, mp: float, rng: random.Random
) -> ArrivalSequence:
    """Resample each aperiodic arrival with probability ``mp`` and repair the rest of its list."""
    if mp <= 0:
        return A
    lists = list(A.arrivals)
    for j in ts.free_aperiodic_ids:
        t = ts.tasks[j]
        new = mutate_task_arrivals(lists[j], t.pmin, t.pmax, A.horizon, mp, rng)
        lists[j] = tuple(new)
    return ArrivalSequence(tuple(lists), A.horizon)


def step(
    ts: TaskSet,
    pop: ArrivalPopulation,
    priorities: Sequence[PriorityAssignment],
    ev: Evaluator,
    cp: float,
    mp: float,
    rng: random.Random,
) -> ArrivalPopulation:
    """One steady-state increment: two offspring, each replacing the worst member if strictly fitter.

    ``pop.fitness`` must be current with respect to ``priorities``.
    """
    pa, pb = tournament_select(pop, rng)
    oa, ob = crossover_arrivals(ts, pa, pb, cp, rng)
    oa = mutate_arrivals(ts, oa, mp, rng)
    ob = mutate_arrivals(ts, ob, mp, rng)
    for child, value in zip((oa, ob), ev.internal_fd([oa, ob], priorities)):
        w = pop.worst_index()
        if value > pop.fitness[w]:
            pop.members[w] = child
            pop.fitness[w] = value
    return pop
