"""Single-queue multi-core preemptive fixed-priority scheduling simulator.

The event-driven kernel comes from the compiled ``_csim`` extension when it
is importable, otherwise from the pure-Python ``_pysim`` module. Setting
``COEVPRIO_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
from functools import lru_cache

from ..model import (
    ArrivalSequence,
    Execution,
    ModelError,
    PriorityAssignment,
    ScheduleScenario,
    TaskSet,
)
from . import _pysim
from .context import SimContext, build_context

if os.environ.get("COEVPRIO_PURE_PYTHON", "") not in ("", "0"):
    kernel = _pysim
    BACKEND = "python"
else:
    try:
        from . import _csim as kernel  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        kernel = _pysim
        BACKEND = "python"

__all__ = [
    "BACKEND",
    "SimContext",
    "build_context",
    "context_for",
    "simulate",
    "brute_force_simulate",
    "check_inputs",
    "scenario_from_arrays",
]


@lru_cache(maxsize=64)
def context_for(ts: TaskSet) -> SimContext:
    return build_context(ts)


def check_inputs(ts: TaskSet, A: ArrivalSequence, P: PriorityAssignment, T: int) -> None:
    if len(P) != ts.n or not P.is_permutation():
        raise ModelError(f"priority assignment {list(P.priority)} is not a permutation of 1..{ts.n}")
    if len(A.arrivals) != ts.n:
        raise ModelError(f"arrival sequence covers {len(A.arrivals)} tasks, expected {ts.n}")
    if T < 0:
        raise ModelError(f"horizon must be >= 0, got {T}")
    for t in ts.tasks:
        lst = A.arrivals[t.id]
        if t.triggered and lst:
            raise ModelError(f"task {t.id} is triggered but has autonomous arrivals")
        if any(b <= a for a, b in zip(lst, lst[1:])):
            raise ModelError(f"task {t.id}: arrivals must be strictly increasing")
        if lst and lst[0] < 0:
            raise ModelError(f"task {t.id}: negative arrival time")


def scenario_from_arrays(ctx: SimContext, arrays, T: int) -> ScheduleScenario:
    jtask, jarr, jend, jdone = arrays
    dl = ctx.deadline
    execs = [
        Execution(int(j), int(a), int(e), int(a) + int(dl[j]), bool(c))
        for j, a, e, c in zip(jtask, jarr, jend, jdone)
    ]
    return ScheduleScenario(execs, T)


def simulate(
    ts: TaskSet, A: ArrivalSequence, P: PriorityAssignment, T: int | None = None
) -> ScheduleScenario:
    """Run the event-driven simulator and return one record per job arriving in [0, T]."""
    T = A.horizon if T is None else T
    check_inputs(ts, A, P, T)
    ctx = context_for(ts)
    times, tasks = A.flat
    return scenario_from_arrays(ctx, kernel.run(ctx, times, tasks, P.priority, T), T)


from .oracle import brute_force_simulate  # noqa: E402
