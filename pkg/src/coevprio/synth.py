"""Synthetic task sets: UUniFast-Discard utilisations, log-uniform periods, aperiodic conversion."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .model import APERIODIC, PERIODIC, PriorityAssignment, Task, TaskSet, check_taskset


@dataclass
class SynthConfig:
    """Times are in ticks; the defaults assume 1 tick = 1 ms."""

    n: int = 20
    u_t: float = 0.7
    pd_min: int = 10
    pd_max: int = 1000
    g: int = 10
    gamma: float = 0.4
    mu: float = 2.0
    cores: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.u_t <= 1.0:
            raise ValueError("u_t must lie in (0, 1]")
        if not 1 <= self.pd_min <= self.pd_max:
            raise ValueError("need 1 <= pd_min <= pd_max")
        if self.g < 1:
            raise ValueError("g must be >= 1")
        if -(-self.pd_min // self.g) * self.g > self.pd_max:
            raise ValueError("no multiple of g lies in [pd_min, pd_max]")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if not self.mu > 1.0:
            raise ValueError("mu must be > 1")
        if self.cores < 1:
            raise ValueError("cores must be >= 1")


def uunifast_discard(n: int, u_t: float, rng: random.Random, max_tries: int = 100_000) -> list[float]:
    """n positive utilisations summing to ``u_t``; draws with any value above 1 are discarded."""
    for _ in range(max_tries):
        out = []
        remaining = u_t
        for i in range(1, n):
            nxt = remaining * rng.random() ** (1.0 / (n - i))
            out.append(remaining - nxt)
            remaining = nxt
        out.append(remaining)
        if all(0.0 < u <= 1.0 for u in out):
            return out
    raise RuntimeError(f"UUniFast-Discard failed to find a valid set after {max_tries} draws")


def generate_periods(n: int, pd_min: int, pd_max: int, g: int, rng: random.Random) -> list[int]:
    """Log-uniform periods in [pd_min, pd_max], rounded to multiples of ``g``."""
    lo, hi = math.log(pd_min), math.log(pd_max)
    out = []
    for _ in range(n):
        raw = math.exp(rng.uniform(lo, hi))
        p = int(round(raw / g)) * g
        while p < pd_min:
            p += g
        while p > pd_max:
            p -= g
        out.append(max(p, 1))
    return out


def synthesize(config: SynthConfig) -> tuple[TaskSet, PriorityAssignment]:
    """Return a task set and its rate-monotonic priority assignment."""
    config.validate()
    rng = random.Random(config.seed)
    n = config.n
    utils = uunifast_discard(n, config.u_t, rng)
    periods = generate_periods(n, config.pd_min, config.pd_max, config.g, rng)
    wcets = [max(1, round(u * p)) for u, p in zip(utils, periods)]

    order = sorted(range(n), key=lambda j: (periods[j], j))
    rm = PriorityAssignment.from_order(order)

    n_aperiodic = int(math.floor(config.gamma * n + 0.5))
    converted = set(rng.sample(range(n), n_aperiodic))
    tasks = []
    for j in range(n):
        if j in converted:
            x = rng.uniform(1.0, config.mu)
            while x <= 1.0:
                x = rng.uniform(1.0, config.mu)
            pmin = periods[j]
            pmax = max(pmin + 1, round(x * pmin))
            tasks.append(Task(j, APERIODIC, wcets[j], periods[j], pmin=pmin, pmax=pmax))
        else:
            tasks.append(Task(j, PERIODIC, wcets[j], periods[j], period=periods[j]))
    ts = TaskSet(tuple(tasks), cores=config.cores, tick_unit="1 ms")
    return check_taskset(ts), rm
