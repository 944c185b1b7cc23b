from __future__ import annotations

import random

import pytest

from coevprio.model import (
    APERIODIC,
    PERIODIC,
    ArrivalSequence,
    PriorityAssignment,
    Task,
    TaskSet,
    random_arrival_sequence,
)


def fig2_taskset() -> TaskSet:
    """Three tasks on one core: two aperiodic (j1, j2) and a periodic j3 with offset 8."""
    return TaskSet(
        (
            Task(0, APERIODIC, wcet=2, deadline=4, pmin=5, pmax=13),
            Task(1, APERIODIC, wcet=1, deadline=4, pmin=3, pmax=10),
            Task(2, PERIODIC, wcet=3, deadline=7, period=8, offset=8),
        ),
        cores=1,
    )


def fig2_arrivals() -> ArrivalSequence:
    # j1 and j2 arrivals past the first ones are a reconstruction; see README
    return ArrivalSequence(((5, 10, 20), (4, 9, 14, 19), (8, 16)), 23)


def jab_taskset(cores: int = 1) -> TaskSet:
    return TaskSet(
        (
            Task(0, PERIODIC, wcet=3, deadline=10, period=10),
            Task(1, PERIODIC, wcet=4, deadline=10, period=10),
        ),
        cores=cores,
    )


def random_instance(rng: random.Random, max_n: int = 4, max_cores: int = 2, max_T: int = 200):
    """Random valid (task set, arrivals, priorities, horizon) with dependencies and triggers."""
    n = rng.randint(1, max_n)
    tasks = []
    kinds = [rng.choice((PERIODIC, APERIODIC)) for _ in range(n)]
    triggers = set()
    triggered = set()
    if n >= 2 and rng.random() < 0.4:
        candidates = [j for j in range(n) if kinds[j] == APERIODIC]
        if candidates:
            tgt = rng.choice(candidates)
            src = rng.choice([j for j in range(n) if j != tgt])
            triggers.add((src, tgt))
            triggered.add(tgt)
    for j in range(n):
        wcet = rng.randint(1, 12)
        deadline = rng.randint(1, 40)
        if kinds[j] == PERIODIC:
            tasks.append(Task(j, PERIODIC, wcet, deadline, period=rng.randint(3, 60), offset=rng.randint(0, 20)))
        else:
            pmin = rng.randint(2, 40)
            tasks.append(
                Task(j, APERIODIC, wcet, deadline, pmin=pmin, pmax=pmin + rng.randint(1, 40),
                     triggered=j in triggered)
            )
    deps = set()
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.25:
                deps.add(frozenset((a, b)))
    ts = TaskSet(tuple(tasks), cores=rng.randint(1, max_cores), dependencies=frozenset(deps),
                 triggers=frozenset(triggers))
    T = rng.randint(0, max_T)
    A = random_arrival_sequence(ts, T, rng)
    P = PriorityAssignment.random(n, rng)
    return ts, A, P, T


@pytest.fixture
def fig2():
    return fig2_taskset(), fig2_arrivals()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
