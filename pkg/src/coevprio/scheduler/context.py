"""Flat, kernel-ready view of a task set."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import TaskSet


@dataclass(frozen=True)
class SimContext:
    n: int
    cores: int
    wcet: np.ndarray  # int64[n]
    deadline: np.ndarray  # int64[n]
    dep: np.ndarray  # uint8[n, n], symmetric
    trig_ptr: np.ndarray  # int64[n + 1], CSR offsets into trig_idx
    trig_idx: np.ndarray  # int64[*], trigger targets in ascending id order
    fanout: np.ndarray  # int64[n], jobs spawned (transitively) by one job incl. itself

    def capacity(self, tasks: np.ndarray) -> int:
        """Upper bound on the number of jobs for the given autonomous arrivals."""
        if len(tasks) == 0:
            return 0
        return int(self.fanout[tasks].sum())


def build_context(ts: TaskSet) -> SimContext:
    n = ts.n
    wcet = np.array([t.wcet for t in ts.tasks], dtype=np.int64)
    deadline = np.array([t.deadline for t in ts.tasks], dtype=np.int64)
    dep = np.zeros((n, n), dtype=np.uint8)
    for pair in ts.dependencies:
        a, b = tuple(pair)
        dep[a, b] = dep[b, a] = 1
    targets: list[list[int]] = [[] for _ in range(n)]
    for a, b in ts.triggers:
        targets[a].append(b)
    for lst in targets:
        lst.sort()
    ptr = np.zeros(n + 1, dtype=np.int64)
    for j in range(n):
        ptr[j + 1] = ptr[j] + len(targets[j])
    idx = np.array([b for lst in targets for b in lst], dtype=np.int64)

    fanout = np.zeros(n, dtype=np.int64)
    memo: dict[int, int] = {}

    def size(j: int) -> int:
        if j not in memo:
            memo[j] = 1 + sum(size(b) for b in targets[j])
        return memo[j]

    for j in range(n):
        fanout[j] = size(j)
    return SimContext(n, ts.cores, wcet, deadline, dep, ptr, idx, fanout)
