"""NSGA-II machinery over priority permutations; both objectives are maximised."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .model import PriorityAssignment

Objectives = tuple[float, ...]


def dominates(a: Objectives, b: Objectives) -> bool:
    """True if ``a`` is no worse than ``b`` everywhere and strictly better somewhere (maximisation)."""
    better = False
    for x, y in zip(a, b):
        if x < y:
            return False
        if x > y:
            better = True
    return better


def non_dominated_sort(points: Sequence[Objectives]) -> list[list[int]]:
    """Fast non-dominated sort; returns fronts as lists of indices, best front first."""
    n = len(points)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    count = [0] * n
    fronts: list[list[int]] = [[]]
    for p in range(n):
        for q in range(p + 1, n):
            if dominates(points[p], points[q]):
                dominated_by[p].append(q)
                count[q] += 1
            elif dominates(points[q], points[p]):
                dominated_by[q].append(p)
                count[p] += 1
    fronts[0] = [p for p in range(n) if count[p] == 0]
    while fronts[-1]:
        nxt = []
        for p in fronts[-1]:
            for q in dominated_by[p]:
                count[q] -= 1
                if count[q] == 0:
                    nxt.append(q)
        fronts.append(sorted(nxt))
    fronts.pop()
    return fronts


def crowding_distance(points: Sequence[Objectives]) -> list[float]:
    """Crowding distance of each point within one front."""
    n = len(points)
    if n <= 2:
        return [math.inf] * n
    out = [0.0] * n
    for m in range(len(points[0])):
        order = sorted(range(n), key=lambda i: (points[i][m], i))
        lo, hi = points[order[0]][m], points[order[-1]][m]
        out[order[0]] = out[order[-1]] = math.inf
        span = hi - lo
        if span == 0:
            continue
        for k in range(1, n - 1):
            i = order[k]
            if out[i] != math.inf:
                out[i] += (points[order[k + 1]][m] - points[order[k - 1]][m]) / span
    return out


def rank_and_crowd(points: Sequence[Objectives]) -> tuple[list[int], list[float]]:
    rank = [0] * len(points)
    crowd = [0.0] * len(points)
    for r, front in enumerate(non_dominated_sort(points)):
        cd = crowding_distance([points[i] for i in front])
        for i, c in zip(front, cd):
            rank[i] = r
            crowd[i] = c
    return rank, crowd


@dataclass
class RankedIndividual:
    assignment: PriorityAssignment
    objectives: Objectives
    rank: int = 0
    crowding: float = 0.0


def rank_population(
    assignments: Sequence[PriorityAssignment], objectives: Sequence[Objectives]
) -> list[RankedIndividual]:
    rank, crowd = rank_and_crowd(objectives)
    return [
        RankedIndividual(a, tuple(o), r, c)
        for a, o, r, c in zip(assignments, objectives, rank, crowd)
    ]


def pmx_pair(p1: Sequence[int], p2: Sequence[int], lo: int, hi: int) -> tuple[list[int], list[int]]:
    """Partially mapped crossover with the segment ``[lo, hi)`` kept from each parent."""

    def child(keep: Sequence[int], other: Sequence[int]) -> list[int]:
        out = list(other)
        out[lo:hi] = keep[lo:hi]
        seg = set(keep[lo:hi])
        mapping = {keep[i]: other[i] for i in range(lo, hi)}
        for i in list(range(lo)) + list(range(hi, len(out))):
            v = other[i]
            while v in seg:
                v = mapping[v]
            out[i] = v
        return out

    return child(p1, p2), child(p2, p1)


def pmx_crossover(
    P1: PriorityAssignment, P2: PriorityAssignment, cp: float, rng: random.Random
) -> tuple[PriorityAssignment, PriorityAssignment]:
    n = len(P1)
    if n < 2 or rng.random() >= cp:
        return P1, P2
    lo, hi = sorted(rng.sample(range(n + 1), 2))
    a, b = pmx_pair(P1.priority, P2.priority, lo, hi)
    return PriorityAssignment(tuple(a)), PriorityAssignment(tuple(b))


def swap_mutation(P: PriorityAssignment, mp: float, rng: random.Random) -> PriorityAssignment:
    n = len(P)
    if n < 2 or rng.random() >= mp:
        return P
    i, j = rng.sample(range(n), 2)
    values = list(P.priority)
    values[i], values[j] = values[j], values[i]
    return PriorityAssignment(tuple(values))


def binary_tournament(pop: Sequence[RankedIndividual], rng: random.Random) -> RankedIndividual:
    a = pop[rng.randrange(len(pop))]
    b = pop[rng.randrange(len(pop))]
    if a.rank != b.rank:
        return a if a.rank < b.rank else b
    if a.crowding != b.crowding:
        return a if a.crowding > b.crowding else b
    return a if rng.random() < 0.5 else b


def breed(
    pop: Sequence[RankedIndividual], size: int, cp: float, mp: float, rng: random.Random
) -> list[PriorityAssignment]:
    """Offspring by tournament selection, PMX and swap mutation."""
    out: list[PriorityAssignment] = []
    while len(out) < size:
        p1 = binary_tournament(pop, rng).assignment
        p2 = binary_tournament(pop, rng).assignment
        c1, c2 = pmx_crossover(p1, p2, cp, rng)
        out.append(swap_mutation(c1, mp, rng))
        if len(out) < size:
            out.append(swap_mutation(c2, mp, rng))
    return out


def select_indices(points: Sequence[Objectives], size: int) -> list[int]:
    """Environmental selection: whole fronts in rank order, last front cut by crowding."""
    chosen: list[int] = []
    for front in non_dominated_sort(points):
        if len(chosen) + len(front) <= size:
            chosen.extend(front)
            if len(chosen) == size:
                break
            continue
        cd = crowding_distance([points[i] for i in front])
        order = sorted(range(len(front)), key=lambda k: (-cd[k], k))
        chosen.extend(front[k] for k in order[: size - len(chosen)])
        break
    return chosen


def select_archive(pop: Sequence[RankedIndividual], size: int) -> list[RankedIndividual]:
    idx = select_indices([p.objectives for p in pop], size)
    kept = [pop[i] for i in idx]
    return rank_population([p.assignment for p in kept], [p.objectives for p in kept])
