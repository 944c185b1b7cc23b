import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from coevprio.indicators import (
    Bounds,
    assess,
    gd_plus,
    hypervolume_2d,
    mann_whitney_u,
    non_dominated,
    normalize,
    spread_delta,
    vargha_delaney_a12,
)

unit = st.floats(0, 1)
points = st.lists(st.tuples(unit, unit), min_size=1, max_size=12)


def test_hv_fixtures():
    assert hypervolume_2d([(0.0, 0.0)]) == 1.0
    assert hypervolume_2d([(1.0, 1.0)]) == 0.0
    assert hypervolume_2d([(0.25, 0.75), (0.75, 0.25)]) == 0.3125


def grid_hv(front, k=400):
    """Midpoint-grid estimate of the dominated area."""
    hit = 0
    for i in range(k):
        for j in range(k):
            x, y = (i + 0.5) / k, (j + 0.5) / k
            hit += any(a <= x and b <= y for a, b in front)
    return hit / k / k


def test_hv_against_grid_estimate():
    rng = random.Random(0)
    for _ in range(5):
        front = [(rng.random(), rng.random()) for _ in range(5)]
        assert hypervolume_2d(front) == pytest.approx(grid_hv(front), abs=0.01)


@settings(max_examples=200)
@given(points, st.tuples(unit, unit))
def test_hv_monotone_and_order_free(front, extra):
    base = hypervolume_2d(front)
    assert hypervolume_2d(front + [extra]) >= base - 1e-12
    assert hypervolume_2d(list(reversed(front))) == pytest.approx(base, abs=1e-12)


def test_gd_plus_fixtures():
    assert gd_plus([(0.5, 0.5)], [(0.5, 0.4)]) == pytest.approx(0.1)
    ref = [(0.1, 0.9), (0.5, 0.5), (0.9, 0.1)]
    assert gd_plus(ref[:2], ref) == 0.0
    assert gd_plus([(0.4, 0.4)], [(0.5, 0.5)]) == 0.0


def test_spread_fixtures():
    assert spread_delta([(0.5, 0.5)], [(0, 1), (1, 0)]) == 1.0
    even = [(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)]
    assert spread_delta(even, even) == 0.0
    # gaps 0.1 and 0.3 along a horizontal line, extremes on the reference
    front = [(0.0, 0.0), (0.1, 0.0), (0.4, 0.0)]
    assert spread_delta(front, [(0.0, 0.0), (0.4, 0.0)]) == pytest.approx(0.5)


@settings(max_examples=100)
@given(points, points)
def test_indicators_permutation_invariant(front, ref):
    rf = list(reversed(front))
    assert gd_plus(rf, ref) == pytest.approx(gd_plus(front, ref))
    assert spread_delta(rf, list(reversed(ref))) == pytest.approx(spread_delta(front, ref))


def exhaustive_u(xs, ys):
    return sum((x > y) + 0.5 * (x == y) for x in xs for y in ys)


def test_mann_whitney_fixtures():
    u, p = mann_whitney_u(range(1, 11), range(11, 21))
    assert u == 0 and p < 0.001
    u, p = mann_whitney_u([3, 3, 4, 5], [3, 3, 4, 5])
    assert p >= 0.95
    xs, ys = [1.5, 2, 2, 7, 9], [2, 3, 3.5, 8]
    u, _ = mann_whitney_u(xs, ys)
    assert u == exhaustive_u(xs, ys)
    u2, _ = mann_whitney_u(ys, xs)
    assert u + u2 == len(xs) * len(ys)


def test_mann_whitney_p_matches_scipy():
    from scipy.stats import mannwhitneyu

    rng = random.Random(1)
    for _ in range(20):
        xs = [rng.randint(0, 6) for _ in range(8)]
        ys = [rng.randint(0, 6) for _ in range(11)]
        ref = mannwhitneyu(xs, ys, alternative="two-sided", method="asymptotic", use_continuity=True)
        u, p = mann_whitney_u(xs, ys)
        assert u == ref.statistic
        assert p == pytest.approx(ref.pvalue, rel=1e-9, abs=1e-12)


def test_a12_fixtures():
    assert vargha_delaney_a12([1], [1]) == 0.5
    assert vargha_delaney_a12([5, 6], [1, 2, 3]) == 1.0
    assert vargha_delaney_a12([1, 2, 3], [2, 2, 2]) == 0.5


@settings(max_examples=100)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=10), st.lists(st.integers(0, 5), min_size=1, max_size=10))
def test_a12_complement_and_pairwise(xs, ys):
    a = vargha_delaney_a12(xs, ys)
    assert a + vargha_delaney_a12(ys, xs) == pytest.approx(1.0)
    assert a == pytest.approx(exhaustive_u(xs, ys) / (len(xs) * len(ys)))


def test_normalisation_flips_and_clamps():
    b = Bounds((-10.0, -2.0), (0.0, 2.0))
    nf = normalize([(0.0, 2.0), (-10.0, -2.0), (-20.0, 5.0)], b)
    assert nf.points == ((0.0, 0.0), (1.0, 1.0), (1.0, 0.0))
    degenerate = normalize([(1.0, 3.0)], Bounds((1.0, 3.0), (1.0, 3.0)))
    assert degenerate.points == ((0.0, 0.0),)


def test_assess_reference_against_itself():
    ref = non_dominated([(-1.0, -3.0), (-2.0, 0.0), (-5.0, 1.0), (-6.0, 0.5)])
    assert (-6.0, 0.5) not in ref
    q = assess(ref, ref)
    assert q.gd_plus == 0.0 and q.hv > 0


def test_union_front_of_permutations_dominates_everything():
    pts = [(float(a), float(b)) for a, b in itertools.product(range(4), range(4))]
    assert non_dominated(pts) == [(3.0, 3.0)]
    assert math.isinf(gd_plus([], pts))
