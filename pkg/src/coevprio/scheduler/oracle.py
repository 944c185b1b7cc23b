"""Tick-by-tick reference simulator used to cross-check the event-driven kernels.

Deliberately naive: the clock advances one tick at a time, the ready set is
an unordered list, and blocking is recomputed from scratch on every query.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import (
    ArrivalSequence,
    Execution,
    ModelError,
    PriorityAssignment,
    ScheduleScenario,
    TaskSet,
)

MAX_TASKS = 6
MAX_HORIZON = 1000


@dataclass(frozen=True)
class TickState:
    """Snapshot after dispatch at tick ``t``: core occupants and waiting jobs.

    Jobs are ``(task, arrival)``; waiting entries carry a third field, True when blocked.
    """

    t: int
    running: tuple[tuple[int, int] | None, ...]
    waiting: tuple[tuple[int, int, bool], ...]


class _Job:
    __slots__ = ("task", "arrival", "remaining", "end", "started", "last_dispatch")

    def __init__(self, task: int, arrival: int, wcet: int) -> None:
        self.task = task
        self.arrival = arrival
        self.remaining = wcet
        self.end: int | None = None
        self.started = False
        self.last_dispatch = -1


def brute_force_simulate(
    ts: TaskSet,
    A: ArrivalSequence,
    P: PriorityAssignment,
    T: int | None = None,
    trace: list[TickState] | None = None,
) -> ScheduleScenario:
    """Reference schedule; when ``trace`` is a list, one :class:`TickState` per tick in [0, T) is appended."""
    T = A.horizon if T is None else T
    if ts.n > MAX_TASKS or T > MAX_HORIZON:
        raise ModelError(
            f"brute-force oracle limited to n <= {MAX_TASKS}, T <= {MAX_HORIZON} (got n={ts.n}, T={T})"
        )
    from . import check_inputs

    check_inputs(ts, A, P, T)
    pr = P.priority
    deps = {j: set() for j in range(ts.n)}
    for pair in ts.dependencies:
        a, b = tuple(pair)
        deps[a].add(b)
        deps[b].add(a)
    triggers = {j: sorted(b for a, b in ts.triggers if a == j) for j in range(ts.n)}

    jobs: list[_Job] = []
    ready: list[_Job] = []
    running: list[_Job | None] = [None] * ts.cores
    stamp = 0

    def in_progress(task: int) -> bool:
        return any(j.started and j.end is None and j.task == task for j in jobs)

    def blocked(job: _Job) -> bool:
        if job.started:
            return False
        return in_progress(job.task) or any(in_progress(k) for k in deps[job.task])

    def rank(job: _Job) -> tuple[int, int, int]:
        return (-pr[job.task], job.arrival, jobs.index(job))

    for t in range(T + 1):
        arriving: list[int] = []
        for c, job in enumerate(running):
            if job is not None and job.remaining == 0:
                job.end = t
                running[c] = None
                arriving.extend(triggers[job.task])
        arriving.extend(j for j in range(ts.n) if t in A.arrivals[j])
        for task in sorted(arriving):
            job = _Job(task, t, ts.tasks[task].wcet)
            jobs.append(job)
            ready.append(job)

        while True:
            eligible = sorted((j for j in ready if not blocked(j)), key=rank)
            if not eligible:
                break
            best = eligible[0]
            if None in running:
                core = running.index(None)
            else:
                victim = min(
                    running, key=lambda j: (pr[j.task], -j.last_dispatch)
                )
                if pr[victim.task] >= pr[best.task]:
                    break
                core = running.index(victim)
                ready.append(victim)
            ready.remove(best)
            running[core] = best
            best.started = True
            stamp += 1
            best.last_dispatch = stamp

        if t == T:
            break
        if trace is not None:
            trace.append(
                TickState(
                    t,
                    tuple(None if j is None else (j.task, j.arrival) for j in running),
                    tuple((j.task, j.arrival, blocked(j)) for j in ready),
                )
            )
        for job in running:
            if job is not None:
                job.remaining -= 1

    execs = []
    for job in jobs:
        dl = job.arrival + ts.tasks[job.task].deadline
        if job.end is None:
            execs.append(Execution(job.task, job.arrival, T, dl, False))
        else:
            execs.append(Execution(job.task, job.arrival, job.end, dl, True))
    execs.sort(key=lambda e: (e.arrival, e.task))
    return ScheduleScenario(execs, T)
