"""Command-line entry point: ``coevprio {synth,optimize,simulate,compare}``."""

from __future__ import annotations

import argparse
import json
import os
import random
import statistics
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Sequence

from . import baselines, coevolution, io, scheduler
from .coevolution import CoevolutionConfig, ConfigError
from .fitness import fd_of_scenario
from .indicators import assess, mann_whitney_u, non_dominated, vargha_delaney_a12
from .model import ArrivalSequence, ModelError, check_arrivals, default_horizon, random_arrival_sequence
from .synth import SynthConfig, synthesize

OUTPUT_ROOT_ENV = "COEVPRIO_OUTPUT_ROOT"
METHODS = ("opam", "rs", "seq")


def output_root() -> Path:
    return Path(os.environ.get(OUTPUT_ROOT_ENV, "runs"))


@dataclass
class RunManifest:
    method: str
    taskset: str
    config: dict
    seed: int
    output_dir: str
    budget: int | None = None

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def read(cls, path: str | Path) -> RunManifest:
        return cls(**json.loads(Path(path).read_text(encoding="utf-8")))


# ---------------------------------------------------------------- synth


def cmd_synth(args: argparse.Namespace) -> int:
    out = Path(args.out) if args.out else output_root() / "subjects"
    out.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        seed = args.seed + k
        cfg = SynthConfig(
            n=args.n, u_t=args.u_t, pd_min=args.pd_min, pd_max=args.pd_max, g=args.g,
            gamma=args.gamma, mu=args.mu, cores=args.cores, seed=seed,
        )
        ts, rm = synthesize(cfg)
        stem = f"taskset_n{args.n}_s{seed}"
        io.write_taskset(out / f"{stem}.json", ts)
        io.write_priorities(out / f"{stem}_rm.json", rm)
        print(f"seed {seed}: {out / (stem + '.json')}")
    return 0


def _check_synth_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    cfg = SynthConfig(
        n=args.n, u_t=args.u_t, pd_min=args.pd_min, pd_max=args.pd_max, g=args.g,
        gamma=args.gamma, mu=args.mu, cores=args.cores,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        parser.error(str(exc))
    if args.count < 1:
        parser.error("--count must be >= 1")


# ---------------------------------------------------------------- optimize

_CONFIG_FLAGS = {f.name for f in fields(CoevolutionConfig)} - {"record_history"}


def build_config(args: argparse.Namespace) -> tuple[CoevolutionConfig, int | None]:
    """Defaults, overridden by the config file, overridden by explicit flags."""
    values: dict = {}
    budget = None
    if args.config:
        doc = io.load_json(args.config)
        if not isinstance(doc, dict):
            raise io.FormatError(f"{args.config}: expected an object")
        for key, v in doc.items():
            if key == "budget":
                budget = v
            elif key in _CONFIG_FLAGS:
                values[key] = v
            else:
                raise io.FormatError(f"{args.config}: unknown field {key!r}")
    for key in _CONFIG_FLAGS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if args.budget is not None:
        budget = args.budget
    cfg = CoevolutionConfig(**values)
    cfg.validate()
    return cfg, budget


def execute(manifest: RunManifest) -> coevolution.BestFront:
    """Run the search a manifest describes and write its artifacts into its output directory."""
    ts = io.read_taskset(manifest.taskset)
    cfg = CoevolutionConfig(**manifest.config)
    out = Path(manifest.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest.write(out / "manifest.json")

    if manifest.method == "opam":
        front = coevolution.run(ts, cfg)
    elif manifest.method == "rs":
        front = baselines.rs_run(ts, cfg)
    elif manifest.method == "seq":
        front = baselines.seq_run(ts, cfg, manifest.budget)
    else:
        raise ConfigError(f"unknown method {manifest.method!r}")

    extra = {"subject": Path(manifest.taskset).stem, "seed": cfg.seed, "invocations": front.invocations}
    extra.update(front.meta)
    io.write_front(out / "front.json", front, extra)
    io.write_cycle_csv(out / "cycles.csv", front.log)
    io.write_history_csv(out / "history.csv", front.history)
    return front


def cmd_optimize(args: argparse.Namespace) -> int:
    if args.manifest:
        doc = io.load_json(args.manifest)
        try:
            manifest = RunManifest(**doc)
        except TypeError as exc:
            raise io.FormatError(f"{args.manifest}: {exc}") from exc
        if args.out:
            manifest.output_dir = args.out
    else:
        if not args.taskset:
            raise ConfigError("a task-set file or --manifest is required")
        ts = io.read_taskset(args.taskset)
        cfg, budget = build_config(args)
        if args.method == "seq" and budget is None:
            raise ConfigError("--method seq needs --budget (simulator invocations)")
        cfg = cfg.resolved(ts)
        stem = Path(args.taskset).stem
        out = args.out or str(output_root() / f"{stem}-{args.method}-s{cfg.seed}")
        manifest = RunManifest(
            method=args.method, taskset=str(args.taskset), config=asdict(cfg), seed=cfg.seed,
            output_dir=out, budget=budget if args.method == "seq" else None,
        )

    front = execute(manifest)
    print(
        f"{manifest.method}: {len(front.members)} front members, "
        f"{front.invocations} simulations -> {manifest.output_dir}"
    )
    if manifest.method == "seq":
        print(
            f"phase 1: {front.meta['phase1_invocations']} simulations, "
            f"phase 2: {front.meta['phase2_invocations']} simulations"
        )
    return 0


# ---------------------------------------------------------------- simulate


def worst_random_arrivals(ts, P, T: int, seed: int, samples: int) -> ArrivalSequence:
    """Highest-fd sequence among ``samples`` random ones (first wins ties)."""
    rng = random.Random(seed)
    best, best_fd = None, -1.0
    for _ in range(samples):
        A = random_arrival_sequence(ts, T, rng)
        value = fd_of_scenario(scheduler.simulate(ts, A, P, T))
        if value > best_fd:
            best, best_fd = A, value
    return best


def cmd_simulate(args: argparse.Namespace) -> int:
    ts = io.read_taskset(args.taskset)
    P = io.read_priorities(args.priorities, ts.n)
    if args.arrivals:
        A = io.read_arrivals(args.arrivals)
        if args.horizon is not None and args.horizon != A.horizon:
            raise ModelError(f"--horizon {args.horizon} differs from the arrivals file horizon {A.horizon}")
        check_arrivals(ts, A)
    else:
        T = args.horizon if args.horizon is not None else default_horizon(ts)
        A = worst_random_arrivals(ts, P, T, args.worst_random, args.samples)
    scenario = scheduler.simulate(ts, A, P, A.horizon)
    if args.out:
        io.write_scenario_csv(args.out, scenario)
    else:
        io.write_scenario(sys.stdout, scenario)
    if args.save_arrivals:
        io.write_arrivals(args.save_arrivals, A)
    return 0


# ---------------------------------------------------------------- compare


INDICATOR_COLUMNS = ("method", "subject", "seed", "HV", "GD+", "Delta")
STAT_COLUMNS = ("indicator", "method_a", "method_b", "n_a", "n_b", "mean_a", "mean_b", "U", "p", "A12")


def compare_fronts(groups: Sequence[tuple[str, Sequence[str]]]):
    """Indicator rows per front file and statistics rows per indicator (first group vs second)."""
    loaded = [(label, [io.read_front(p) for p in paths]) for label, paths in groups]
    reference = non_dominated([pt for _, fronts in loaded for f in fronts for pt in f.points()])
    rows = []
    values: dict[str, dict[str, list[float]]] = {}
    for label, fronts in loaded:
        per = values.setdefault(label, {"HV": [], "GD+": [], "Delta": []})
        for f in fronts:
            q = assess(f.points(), reference)
            rows.append((label, f.meta.get("subject", ""), f.meta.get("seed", ""), q.hv, q.gd_plus, q.spread))
            per["HV"].append(q.hv)
            per["GD+"].append(q.gd_plus)
            per["Delta"].append(q.spread)
    stats = []
    if len(loaded) == 2:
        (la, _), (lb, _) = loaded
        for ind in ("HV", "GD+", "Delta"):
            xs, ys = values[la][ind], values[lb][ind]
            row = [ind, la, lb, len(xs), len(ys), statistics.fmean(xs), statistics.fmean(ys)]
            if len(xs) < 2 or len(ys) < 2:
                row += ["n/a", "n/a", "n/a"]
            else:
                u, p = mann_whitney_u(xs, ys)
                row += [u, p, vargha_delaney_a12(xs, ys)]
            stats.append(tuple(row))
    return rows, stats


def cmd_compare(args: argparse.Namespace) -> int:
    groups = [(args.label_a, args.a), (args.label_b, args.b)]
    if args.label_a == args.label_b:
        groups = [(args.label_a + "_a", args.a), (args.label_b + "_b", args.b)]
    rows, stats = compare_fronts(groups)
    out = Path(args.out) if args.out else output_root() / "compare"
    out.mkdir(parents=True, exist_ok=True)
    io.write_rows_csv(out / "indicators.csv", INDICATOR_COLUMNS, rows)
    io.write_rows_csv(out / "statistics.csv", STAT_COLUMNS, stats)
    for row in stats:
        print(",".join(str(x) for x in row))
    return 0


# ---------------------------------------------------------------- parser


def _unit_float(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coevprio", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic task sets")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--u-t", type=float, default=0.7)
    p.add_argument("--pd-min", type=int, default=10)
    p.add_argument("--pd-max", type=int, default=1000)
    p.add_argument("--g", type=int, default=10)
    p.add_argument("--gamma", type=float, default=0.4)
    p.add_argument("--mu", type=float, default=2.0)
    p.add_argument("--cores", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", help=f"output directory (default ${OUTPUT_ROOT_ENV}/subjects)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("optimize", help="search priority assignments")
    p.add_argument("taskset", nargs="?")
    p.add_argument("--manifest", help="replay a recorded run manifest (other search flags are ignored)")
    p.add_argument("--method", choices=METHODS, default="opam")
    p.add_argument("--config", help="JSON file of configuration values (flags override it)")
    p.add_argument("--budget", type=int, help="simulator invocations (required for seq)")
    p.add_argument("--n-c", dest="n_c", type=int)
    p.add_argument("--ps-a", dest="ps_a", type=int)
    p.add_argument("--ps-p", dest="ps_p", type=int)
    p.add_argument("--cp-a", dest="cp_a", type=_unit_float)
    p.add_argument("--cp-p", dest="cp_p", type=_unit_float)
    p.add_argument("--mp-a", dest="mp_a", type=_unit_float)
    p.add_argument("--mp-p", dest="mp_p", type=_unit_float)
    p.add_argument("--horizon", type=int)
    p.add_argument("--external-set-size", dest="external_set_size", type=int)
    p.add_argument("--external-batch", dest="external_batch", type=int)
    p.add_argument("--external-seed", dest="external_seed", type=int)
    p.add_argument("--steps-per-cycle", dest="steps_per_cycle", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", help=f"run directory (default under ${OUTPUT_ROOT_ENV})")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="simulate one scenario and write it as CSV")
    p.add_argument("taskset")
    p.add_argument("--priorities", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--arrivals", help="arrival-sequence JSON file")
    src.add_argument("--worst-random", type=int, metavar="SEED",
                     help="use the worst of --samples random arrival sequences")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--horizon", type=int)
    p.add_argument("--out", help="scenario CSV path (default stdout)")
    p.add_argument("--save-arrivals", help="also write the simulated arrival sequence")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="quality indicators and statistics for two groups of fronts")
    p.add_argument("--a", nargs="+", required=True, help="front files of the first group")
    p.add_argument("--b", nargs="+", required=True, help="front files of the second group")
    p.add_argument("--label-a", default="a")
    p.add_argument("--label-b", default="b")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "synth":
        _check_synth_args(parser, args)
    if args.command == "simulate" and args.samples < 1:
        parser.error("--samples must be >= 1")
    try:
        return args.func(args)
    except (FileNotFoundError, io.FormatError, ModelError, ConfigError) as exc:
        print(f"coevprio {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
