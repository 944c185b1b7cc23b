"""Compare the compiled and pure-Python simulation kernels on synthetic task sets.

    python3 benchmarks/bench_simulate.py --n 10 20 --horizon 2000 10000 --pairs 200
"""

from __future__ import annotations

import argparse
import random
import time

from coevprio.model import PriorityAssignment, random_arrival_sequence
from coevprio.scheduler import _pysim, context_for
from coevprio.synth import SynthConfig, synthesize

try:
    from coevprio.scheduler import _csim
except ImportError:  # extension not built
    _csim = None


def time_kernel(kernel, ctx, inputs, T: int) -> float:
    start = time.perf_counter()
    for (times, tasks), prio in inputs:
        kernel.fd(ctx, times, tasks, prio, T)
    return time.perf_counter() - start


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, nargs="+", default=[10, 20, 30])
    ap.add_argument("--horizon", type=int, nargs="+", default=[2000, 10000])
    ap.add_argument("--pairs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>4} {'T':>7} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.n:
        ts, _ = synthesize(SynthConfig(n=n, seed=args.seed))
        ctx = context_for(ts)
        for T in args.horizon:
            rng = random.Random(args.seed)
            inputs = [
                (random_arrival_sequence(ts, T, rng).flat, PriorityAssignment.random(n, rng).priority)
                for _ in range(args.pairs)
            ]
            py = time_kernel(_pysim, ctx, inputs, T)
            if _csim is None:
                print(f"{n:>4} {T:>7} {py:>10.4f} {'n/a':>10} {'n/a':>8}")
                continue
            cy = time_kernel(_csim, ctx, inputs, T)
            for (times, tasks), prio in inputs[:5]:
                assert _pysim.fd(ctx, times, tasks, prio, T) == _csim.fd(ctx, times, tasks, prio, T)
            print(f"{n:>4} {T:>7} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
