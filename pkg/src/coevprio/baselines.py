"""Comparison methods sharing the simulator and fitness stack: random search and sequential search."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from . import arrivals_ga, nsga
from .coevolution import BestFront, CoevolutionConfig, SearchState, evolve_priorities
from .model import ArrivalSequence

@dataclass(frozen=True)
class Budget:
    """Search effort: simulator invocations, optionally also capped in wall-clock seconds."""

    simulator_invocations: int
    seconds: float | None = None

    def __post_init__(self) -> None:
        if self.simulator_invocations < 0:
            raise ValueError("budget must be >= 0")
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError("seconds must be > 0")


# consecutive iterations without a single new simulation before a SEQ phase gives up
STALL_LIMIT = 1000


def rs_run(
    ts,
    config: CoevolutionConfig | None = None,
    *,
    external: Sequence[ArrivalSequence] | None = None,
) -> BestFront:
    """Random search keeping the best arrival and priority populations seen so far."""
    state = SearchState(ts, config or CoevolutionConfig(), "rs", external)
    cfg, ev = state.cfg, state.ev
    A = state.random_arrivals(cfg.ps_a)
    P = state.random_priorities(cfg.ps_p)
    evolve_arrivals = bool(ts.free_aperiodic_ids)
    state.absorb(P, 0)
    for cycle in range(1, cfg.n_c + 1):
        if evolve_arrivals:
            pool = A + state.random_arrivals(cfg.ps_a)
            values = ev.internal_fd(pool, P)
            order = sorted(range(len(pool)), key=lambda i: (-values[i], i))
            A = [pool[i] for i in order[: cfg.ps_a]]
        pool_p = P + state.random_priorities(cfg.ps_p)
        objs = ev.objectives(pool_p, A)
        P = [pool_p[i] for i in nsga.select_indices(objs, cfg.ps_p)]
        state.absorb(P, cycle)
    return state.result()


def seq_run(
    ts,
    config: CoevolutionConfig | None = None,
    budget: int | Budget = 0,
    *,
    external: Sequence[ArrivalSequence] | None = None,
) -> BestFront:
    """Worst-case arrival GA against a frozen random priority population, then NSGA-II against
    the frozen arrivals. The budget is split evenly between the two phases; with ``seconds``
    set, each phase also stops after half the wall-clock allowance."""
    if not isinstance(budget, Budget):
        budget = Budget(budget)
    seconds = budget.seconds
    budget = budget.simulator_invocations
    state = SearchState(ts, config or CoevolutionConfig(), "seq", external)
    cfg, ev, rng = state.cfg, state.ev, state.rng
    P0 = state.random_priorities(cfg.ps_p)
    A = arrivals_ga.ArrivalPopulation(state.random_arrivals(cfg.ps_a))
    half = budget // 2
    deadline = None

    def out_of_time() -> bool:
        return deadline is not None and time.perf_counter() >= deadline

    if budget > 0 and ts.free_aperiodic_ids:
        if seconds is not None:
            deadline = time.perf_counter() + seconds / 2
        A.refresh(ev, P0)
        stall, seen = 0, ev.invocations
        while ev.invocations < half and stall < STALL_LIMIT and not out_of_time():
            arrivals_ga.step(ts, A, P0, ev, cfg.cp_a, cfg.mp_a, rng)
            stall = stall + 1 if ev.invocations == seen else 0
            seen = ev.invocations
    phase1 = ev.invocations

    P = list(P0)
    if budget > 0:
        if seconds is not None:
            deadline = time.perf_counter() + seconds / 2
        stall, seen = 0, ev.invocations
        while ev.invocations < budget and stall < STALL_LIMIT and not out_of_time():
            P = evolve_priorities(state, P, A.members)
            stall = stall + 1 if ev.invocations == seen else 0
            seen = ev.invocations
    phase2 = ev.invocations - phase1

    state.absorb(P, 1 if budget > 0 else 0)
    result = state.result()
    result.meta.update(
        {"budget": budget, "phase1_invocations": phase1, "phase2_invocations": phase2}
    )
    return result
