# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled event-driven simulator kernel. Same semantics as ``_pysim``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport ldexp

cnp.import_array()

ctypedef long long i64


cdef inline bint _before(i64 pa, i64 aa, i64 xa, i64 pb, i64 ab, i64 xb) noexcept nogil:
    # queue order: higher priority, then earlier arrival, then lower job index
    if pa != pb:
        return pa > pb
    if aa != ab:
        return aa < ab
    return xa < xb


cdef inline void _qinsert(i64* q, i64* qlen, i64 x, i64* prio, i64* jtask, i64* jarr) noexcept nogil:
    cdef i64 p = prio[jtask[x]]
    cdef i64 a = jarr[x]
    cdef i64 k = qlen[0]
    while k > 0 and _before(p, a, x, prio[jtask[q[k - 1]]], jarr[q[k - 1]], q[k - 1]):
        q[k] = q[k - 1]
        k -= 1
    q[k] = x
    qlen[0] += 1


cdef inline void _qpop(i64* q, i64* qlen, i64 i) noexcept nogil:
    cdef i64 k
    for k in range(i, qlen[0] - 1):
        q[k] = q[k + 1]
    qlen[0] -= 1


cdef i64 _simulate(
    i64 n, i64 m, i64* wcet, unsigned char* dep, i64* tptr, i64* tidx,
    i64* times, i64* tasks, i64 K, i64* prio, i64 T,
    i64* jtask, i64* jarr, i64* jend, unsigned char* jdone,
    i64* rem, unsigned char* started, i64* dseq,
    i64* act, i64* core, i64* q, i64* newbuf,
) noexcept nogil:
    cdef i64 njobs = 0, qlen = 0, counter = 0
    cdef i64 ai = 0, t, c, x, y, z, j, k, i, nnew, b, cv, v, nxt, dt, freec
    cdef bint blocked, busy
    for c in range(m):
        core[c] = -1
    for j in range(n):
        act[j] = 0
    if K == 0:
        return 0
    t = times[0]
    while True:
        nnew = 0
        for c in range(m):
            x = core[c]
            if x >= 0 and rem[x] == 0:
                jend[x] = t
                jdone[x] = 1
                j = jtask[x]
                act[j] -= 1
                core[c] = -1
                for b in range(tptr[j], tptr[j + 1]):
                    newbuf[nnew] = tidx[b]
                    nnew += 1
        while ai < K and times[ai] == t:
            newbuf[nnew] = tasks[ai]
            nnew += 1
            ai += 1
        # insertion sort of the new task ids
        for i in range(1, nnew):
            y = newbuf[i]
            k = i
            while k > 0 and newbuf[k - 1] > y:
                newbuf[k] = newbuf[k - 1]
                k -= 1
            newbuf[k] = y
        for i in range(nnew):
            j = newbuf[i]
            x = njobs
            njobs += 1
            jtask[x] = j
            jarr[x] = t
            rem[x] = wcet[j]
            jend[x] = -1
            jdone[x] = 0
            started[x] = 0
            dseq[x] = 0
            _qinsert(q, &qlen, x, prio, jtask, jarr)

        freec = 0
        for c in range(m):
            if core[c] < 0:
                freec += 1
        i = 0
        while i < qlen:
            x = q[i]
            j = jtask[x]
            if not started[x]:
                blocked = act[j] > 0
                if not blocked:
                    for k in range(n):
                        if dep[j * n + k] and act[k] > 0:
                            blocked = True
                            break
                if blocked:
                    i += 1
                    continue
            if freec > 0:
                _qpop(q, &qlen, i)
                for c in range(m):
                    if core[c] < 0:
                        break
                freec -= 1
            else:
                cv = 0
                for c in range(1, m):
                    y = core[c]
                    z = core[cv]
                    if prio[jtask[y]] < prio[jtask[z]] or (
                        prio[jtask[y]] == prio[jtask[z]] and dseq[y] > dseq[z]
                    ):
                        cv = c
                v = core[cv]
                if prio[jtask[v]] >= prio[j]:
                    break
                _qpop(q, &qlen, i)
                _qinsert(q, &qlen, v, prio, jtask, jarr)
                c = cv
            core[c] = x
            if not started[x]:
                started[x] = 1
                act[j] += 1
            counter += 1
            dseq[x] = counter

        if t >= T:
            break
        nxt = T
        if ai < K and times[ai] < nxt:
            nxt = times[ai]
        busy = False
        for c in range(m):
            x = core[c]
            if x >= 0:
                busy = True
                if t + rem[x] < nxt:
                    nxt = t + rem[x]
        if not busy and ai >= K:
            break
        dt = nxt - t
        for c in range(m):
            x = core[c]
            if x >= 0:
                rem[x] -= dt
        t = nxt

    for x in range(njobs):
        if not jdone[x]:
            jend[x] = T
    return njobs


def run(ctx, times, tasks, prio, i64 T):
    """Simulate; returns numpy arrays (task, arrival, end, complete) per job."""
    cdef cnp.ndarray[i64, ndim=1] times_a = np.ascontiguousarray(times, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] tasks_a = np.ascontiguousarray(tasks, dtype=np.int64)
    cdef i64 K = np.searchsorted(times_a, T, side="right")
    if K == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy(), e.copy(), np.empty(0, dtype=bool)
    cdef cnp.ndarray[i64, ndim=1] prio_a = np.ascontiguousarray(prio, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] wcet = ctx.wcet
    cdef cnp.ndarray[unsigned char, ndim=2] dep = ctx.dep
    cdef cnp.ndarray[i64, ndim=1] tptr = ctx.trig_ptr
    cdef cnp.ndarray[i64, ndim=1] tidx = np.append(ctx.trig_idx, -1)
    cdef i64 n = ctx.n, m = ctx.cores
    cdef i64 cap = ctx.capacity(tasks_a[:K]) + 1
    cdef cnp.ndarray[i64, ndim=1] jtask = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] jarr = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] jend = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[unsigned char, ndim=1] jdone = np.empty(cap, dtype=np.uint8)
    cdef cnp.ndarray[i64, ndim=1] scratch = np.empty(4 * cap + 2 * n + m + 1, dtype=np.int64)
    cdef cnp.ndarray[unsigned char, ndim=1] started = np.empty(cap, dtype=np.uint8)
    cdef i64* base = &scratch[0]
    cdef i64 njobs
    with nogil:
        njobs = _simulate(
            n, m, &wcet[0], &dep[0, 0], &tptr[0], &tidx[0],
            &times_a[0], &tasks_a[0], K, &prio_a[0], T,
            &jtask[0], &jarr[0], &jend[0], &jdone[0],
            base, &started[0], base + cap,
            base + 2 * cap, base + 2 * cap + n, base + 2 * cap + n + m,
            base + 3 * cap + n + m,
        )
    return jtask[:njobs], jarr[:njobs], jend[:njobs], jdone[:njobs].astype(bool)


def fd(ctx, times, tasks, prio, i64 T):
    """Sum of 2**dist over all jobs, accumulated in record order."""
    jtask, jarr, jend, _ = run(ctx, times, tasks, prio, T)
    cdef i64[:] jt = jtask
    cdef i64[:] ja = jarr
    cdef i64[:] je = jend
    cdef i64[:] dl = ctx.deadline
    cdef i64 x, d, N = jt.shape[0]
    cdef double total = 0.0
    with nogil:
        for x in range(N):
            d = je[x] - ja[x] - dl[jt[x]]
            if d > 1022:
                d = 1022
            elif d < -1022:
                d = -1022
            total += ldexp(1.0, <int>d)
    return total
