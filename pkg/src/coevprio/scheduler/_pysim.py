"""Pure-Python event-driven simulator; mirrors ``_csim.pyx`` step for step.

Jobs are created in (arrival, task id) order, so the job index order is
already the record order of the resulting scenario.
"""

from __future__ import annotations

import math
from bisect import insort

from .context import SimContext

DIST_CLAMP = 1022


def run(ctx: SimContext, times, tasks, prio, T: int):
    """Simulate; returns parallel lists (task, arrival, end, complete) per job."""
    n, m = ctx.n, ctx.cores
    wcet = ctx.wcet.tolist()
    tptr = ctx.trig_ptr.tolist()
    tidx = ctx.trig_idx.tolist()
    deps = [[k for k in range(n) if ctx.dep[j, k]] for j in range(n)]
    prio = [int(p) for p in prio]
    times = [int(a) for a in times]
    tasks = [int(j) for j in tasks]
    K = 0
    while K < len(times) and times[K] <= T:
        K += 1

    job_task: list[int] = []
    job_arr: list[int] = []
    rem: list[int] = []
    end: list[int] = []
    done: list[bool] = []
    started: list[bool] = []
    dseq: list[int] = []
    act = [0] * n
    core = [-1] * m
    queue: list[tuple[int, int, int]] = []
    counter = 0
    if K == 0:
        return job_task, job_arr, end, done

    ai = 0
    t = times[0]
    while True:
        new: list[int] = []
        for c in range(m):
            x = core[c]
            if x >= 0 and rem[x] == 0:
                end[x] = t
                done[x] = True
                j = job_task[x]
                act[j] -= 1
                core[c] = -1
                new.extend(tidx[tptr[j]:tptr[j + 1]])
        while ai < K and times[ai] == t:
            new.append(tasks[ai])
            ai += 1
        new.sort()
        for j in new:
            x = len(job_task)
            job_task.append(j)
            job_arr.append(t)
            rem.append(wcet[j])
            end.append(-1)
            done.append(False)
            started.append(False)
            dseq.append(0)
            insort(queue, (-prio[j], t, x))

        # dispatch
        free = core.count(-1)
        i = 0
        while i < len(queue):
            negp, _, x = queue[i]
            j = job_task[x]
            if not started[x]:
                if act[j] > 0 or any(act[k] > 0 for k in deps[j]):
                    i += 1
                    continue
            if free > 0:
                queue.pop(i)
                c = core.index(-1)
                free -= 1
            else:
                cv = -1
                for c in range(m):
                    y = core[c]
                    if cv < 0:
                        cv = c
                        continue
                    z = core[cv]
                    py, pz = prio[job_task[y]], prio[job_task[z]]
                    if py < pz or (py == pz and dseq[y] > dseq[z]):
                        cv = c
                v = core[cv]
                if prio[job_task[v]] >= -negp:
                    break
                queue.pop(i)
                insort(queue, (-prio[job_task[v]], job_arr[v], v))
                c = cv
            core[c] = x
            if not started[x]:
                started[x] = True
                act[j] += 1
            counter += 1
            dseq[x] = counter

        if t >= T:
            break
        nxt = T
        if ai < K and times[ai] < nxt:
            nxt = times[ai]
        busy = False
        for x in core:
            if x >= 0:
                busy = True
                if t + rem[x] < nxt:
                    nxt = t + rem[x]
        if not busy and ai >= K:
            break
        dt = nxt - t
        for x in core:
            if x >= 0:
                rem[x] -= dt
        t = nxt

    for x in range(len(job_task)):
        if not done[x]:
            end[x] = T
    return job_task, job_arr, end, done


def fd(ctx: SimContext, times, tasks, prio, T: int) -> float:
    job_task, job_arr, end, _ = run(ctx, times, tasks, prio, T)
    dl = ctx.deadline.tolist()
    total = 0.0
    for j, a, e in zip(job_task, job_arr, end):
        d = e - a - dl[j]
        if d > DIST_CLAMP:
            d = DIST_CLAMP
        elif d < -DIST_CLAMP:
            d = -DIST_CLAMP
        total += math.ldexp(1.0, d)
    return total
