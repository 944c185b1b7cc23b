import random

import numpy as np
import pytest

from coevprio import coevolution
from coevprio.coevolution import (
    CoevolutionConfig,
    ConfigError,
    FrontMember,
    arrival_vector,
    generate_external_set,
    update_best,
)
from coevprio.fitness import Evaluator
from coevprio.model import (
    PERIODIC,
    ModelError,
    PriorityAssignment,
    Task,
    TaskSet,
    fixed_gap_sequence,
    validate_arrivals,
)
from coevprio.nsga import dominates
from coevprio.synth import SynthConfig, synthesize


def small_subject(n=6, seed=1):
    ts, _ = synthesize(SynthConfig(n=n, seed=seed, gamma=0.5))
    return ts


def test_config_validation():
    with pytest.raises(ConfigError):
        CoevolutionConfig(ps_p=1).validate()
    with pytest.raises(ConfigError):
        CoevolutionConfig(cp_a=1.5).validate()
    with pytest.raises(ConfigError):
        coevolution.run(small_subject(), CoevolutionConfig(mp_p=-0.1))
    cfg = CoevolutionConfig().resolved(small_subject())
    assert cfg.mp_a == cfg.mp_p == 1 / 6 and cfg.horizon >= 1


def test_external_set_defaults_first():
    ts = small_subject()
    T = 300
    E = generate_external_set(ts, 2, T, random.Random(0))
    assert E == [fixed_gap_sequence(ts, T, "max"), fixed_gap_sequence(ts, T, "min")]
    E = generate_external_set(ts, 10, T, random.Random(0))
    assert len(E) == 10 and all(validate_arrivals(ts, e) == [] for e in E)


def test_external_set_all_periodic_is_constant():
    ts = TaskSet((Task(0, PERIODIC, 1, 10, period=10), Task(1, PERIODIC, 2, 20, period=20)))
    E = generate_external_set(ts, 5, 100, random.Random(3))
    assert all(e == E[0] for e in E)


def test_external_set_accepts_most_distant_candidate():
    ts = small_subject()
    T = 300
    record = []
    E = generate_external_set(ts, 10, T, random.Random(5), batch=50, record=record)
    assert len(record) == 8
    for k, batch in enumerate(record):
        accepted = E[2 + k]
        previous = [arrival_vector(ts, e) for e in E[: 2 + k]]
        # recompute distances independently of the recorded values
        dists = [min(float(np.sqrt(((arrival_vector(ts, c) - v) ** 2).sum())) for v in previous)
                 for c in batch.candidates]
        assert batch.candidates[batch.accepted] == accepted
        assert dists[batch.accepted] == max(dists)


def test_arrival_vector_pads_with_horizon():
    ts = small_subject()
    T = 300
    A = fixed_gap_sequence(ts, T, "max")
    v = arrival_vector(ts, A)
    expected = sum(-(-T // ts.tasks[j].pmin) for j in ts.free_aperiodic_ids)
    assert v.shape == (expected,)
    assert v.max() == T


def test_update_best_keeps_nondominated_and_dedups():
    P = [PriorityAssignment(p) for p in [(1, 2, 3), (2, 1, 3), (3, 2, 1), (1, 3, 2)]]
    members = [FrontMember(P[0], -1.0, 0.0), FrontMember(P[1], -2.0, 1.0),
               FrontMember(P[2], -3.0, 0.0), FrontMember(P[0], -1.0, 0.0), FrontMember(P[3], -0.5, -1.0)]
    best = update_best(members, 10)
    assert [m.assignment for m in best] == [P[3], P[0], P[1]]


def test_zero_cycles_uses_initial_population_only():
    ts = small_subject()
    cfg = CoevolutionConfig(n_c=0, horizon=400, seed=2)
    front = coevolution.run(ts, cfg)
    assert len(front.log) == 1 and front.log[0]["cycle"] == 0
    ev = Evaluator(ts, 400)
    for m in front.members:
        assert ev.objectives([m.assignment], front.external)[0] == m.objectives


def test_all_periodic_set_skips_arrival_evolution():
    ts = TaskSet(tuple(Task(j, PERIODIC, 2, 10 * (j + 1), period=10 * (j + 1)) for j in range(4)))
    front = coevolution.run(ts, CoevolutionConfig(n_c=5, seed=1))
    assert front.members and all(m.fc == 0 for m in front.members)


def _assert_non_degrading(history):
    for before, after in zip(history, history[1:]):
        for new in after:
            assert not any(dominates(old, new) for old in before)


def test_best_front_never_degrades_and_is_nondominated():
    ts = small_subject(8, 3)
    front = coevolution.run(ts, CoevolutionConfig(n_c=40, horizon=600, seed=4))
    _assert_non_degrading(front.history)
    pts = front.points()
    assert all(not dominates(a, b) for a in pts for b in pts)
    assert len(front.members) <= 10


def test_external_values_stable_across_cycles():
    ts = small_subject(6, 4)
    seen = {}

    def watch(cycle, state):
        for m in state.best:
            seen.setdefault(m.assignment, m.objectives)
            assert seen[m.assignment] == m.objectives

    coevolution.run(ts, CoevolutionConfig(n_c=15, horizon=400, seed=0), on_cycle=watch)


def test_same_seed_same_front():
    ts = small_subject(6, 5)
    cfg = CoevolutionConfig(n_c=10, horizon=400, seed=9)
    a = coevolution.run(ts, cfg)
    b = coevolution.run(ts, cfg)
    assert a.members == b.members
    par = coevolution.run(ts, CoevolutionConfig(n_c=10, horizon=400, seed=9, jobs=3))
    assert par.members == a.members


def test_initial_assignment_is_seeded():
    ts = small_subject()
    rm = PriorityAssignment.from_order(range(ts.n))
    front = coevolution.run(ts, CoevolutionConfig(n_c=0, horizon=200), initial=rm)
    assert front.log[0]["invocations"] > 0
    with pytest.raises(ModelError):
        coevolution.run(ts, CoevolutionConfig(n_c=0), initial=PriorityAssignment((1, 1, 2, 3, 4, 5)))
