"""Pareto-front quality indicators and two-sample statistics for comparing search runs.

Fronts come in as maximisation points (fs, fc). ``normalize`` maps them into a
[0, 1]^2 minimisation space using bounds taken from a reference union.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm, rankdata

Point = tuple[float, float]


@dataclass(frozen=True)
class Bounds:
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    @classmethod
    def of(cls, *fronts: Sequence[Sequence[float]]) -> Bounds:
        pts = np.array([p for f in fronts for p in f], dtype=float)
        return cls(tuple(pts.min(axis=0)), tuple(pts.max(axis=0)))


@dataclass(frozen=True)
class NormalizedFront:
    points: tuple[Point, ...]
    bounds: Bounds


def normalize(front: Sequence[Sequence[float]], bounds: Bounds) -> NormalizedFront:
    """Flip maximisation objectives to minimisation and scale to [0, 1] (clamped)."""
    out = []
    for p in front:
        q = []
        for x, lo, hi in zip(p, bounds.lo, bounds.hi):
            v = 0.0 if hi == lo else (hi - x) / (hi - lo)
            q.append(min(1.0, max(0.0, v)))
        out.append(tuple(q))
    return NormalizedFront(tuple(out), bounds)


def _pts(front) -> list[Point]:
    if isinstance(front, NormalizedFront):
        return list(front.points)
    return [tuple(map(float, p)) for p in front]


def hypervolume_2d(front) -> float:
    """Area dominated by the front inside [0, 1]^2 with reference point (1, 1)."""
    pts = sorted((min(1.0, max(0.0, x)), min(1.0, max(0.0, y))) for x, y in _pts(front))
    area = 0.0
    best_y = 1.0
    for x, y in pts:
        if y < best_y:
            area += (1.0 - x) * (best_y - y)
            best_y = y
    return area


def gd_plus(front, reference) -> float:
    """Mean over front points of the dominance-aware distance to the nearest reference point."""
    pts = np.asarray(_pts(front), dtype=float)
    ref = np.asarray(_pts(reference), dtype=float)
    if len(pts) == 0:
        return math.inf
    diff = np.maximum(pts[:, None, :] - ref[None, :, :], 0.0)
    d = np.sqrt((diff**2).sum(axis=2)).min(axis=1)
    return float(d.mean())


def spread_delta(front, reference) -> float:
    """Deb's spread over the front sorted by the first objective; 1 for a single point."""
    pts = sorted(_pts(front))
    if len(pts) < 2:
        return 1.0
    ref = sorted(_pts(reference))
    gaps = [math.dist(a, b) for a, b in zip(pts, pts[1:])]
    mean = sum(gaps) / len(gaps)
    d_f = math.dist(pts[0], ref[0])
    d_l = math.dist(pts[-1], ref[-1])
    num = d_f + d_l + sum(abs(g - mean) for g in gaps)
    den = d_f + d_l + len(gaps) * mean
    return 0.0 if den == 0 else num / den


def mann_whitney_u(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """U statistic of ``xs`` (midranks for ties) and a two-sided normal-approximation p-value
    with tie and continuity corrections."""
    n, m = len(xs), len(ys)
    if n == 0 or m == 0:
        raise ValueError("both samples must be non-empty")
    ranks = rankdata(np.concatenate([np.asarray(xs, float), np.asarray(ys, float)]))
    u = float(ranks[:n].sum() - n * (n + 1) / 2.0)
    mu = n * m / 2.0
    _, counts = np.unique(ranks, return_counts=True)
    N = n + m
    tie = float((counts**3 - counts).sum())
    var = n * m / 12.0 * ((N + 1) - tie / (N * (N - 1)))
    if var <= 0:
        return u, 1.0
    z = max(abs(u - mu) - 0.5, 0.0) / math.sqrt(var)
    return u, float(min(1.0, 2.0 * norm.sf(z)))


def vargha_delaney_a12(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Probability that a draw from ``xs`` exceeds one from ``ys`` (ties count half)."""
    x = np.asarray(xs, float)[:, None]
    y = np.asarray(ys, float)[None, :]
    wins = float((x > y).sum()) + 0.5 * float((x == y).sum())
    return wins / (x.size * y.size)


def non_dominated(points: Sequence[Sequence[float]]) -> list[tuple[float, ...]]:
    """Distinct maximisation-non-dominated points."""
    from .nsga import non_dominated_sort

    uniq = sorted(set(tuple(map(float, p)) for p in points))
    if not uniq:
        return []
    return [uniq[i] for i in non_dominated_sort(uniq)[0]]


@dataclass
class QualityReport:
    hv: float
    gd_plus: float
    spread: float


def assess(front: Sequence[Sequence[float]], reference: Sequence[Sequence[float]]) -> QualityReport:
    """Indicators of a maximisation front against a reference front; both are normalised
    with the bounds of the reference."""
    bounds = Bounds.of(reference)
    nf = normalize(front, bounds)
    nr = normalize(reference, bounds)
    return QualityReport(hypervolume_2d(nf), gd_plus(nf, nr), spread_delta(nf, nr))
