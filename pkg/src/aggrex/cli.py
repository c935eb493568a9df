"""Command-line entry point ``aggrex``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bench import ExperimentConfig, emit_report, run_experiment, run_full
from .cep import build_lp
from .cluster import run_method
from .features import build_day_elements, day_sums_csv
from .instance import InstanceError, SyntheticSpec, generate_synthetic, load_instance, save_instance
from .lpfile import export_lp, read_lp
from .select import STRATEGIES, apply_plan, build_plan, dummy_selection
from .solve import solve_lp, solve_with_highs


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_gen(args) -> int:
    raw = json.loads(Path(args.spec).read_text()) if args.spec else {}
    inst = generate_synthetic(SyntheticSpec.from_dict(raw), args.seed)
    save_instance(inst, args.out, sidecar=args.csv)
    print(f"wrote {args.out}: {inst.n_days} days, {len(inst.investments)} candidates")
    return 0


def cmd_features(args) -> int:
    fs = build_day_elements(load_instance(args.instance))
    if args.dump_sums is not None:
        _write(day_sums_csv(fs), args.dump_sums)
    else:
        print(f"{fs.n_days} days x {len(fs.series_ids)} series x {fs.day_length} hours")
    return 0


def cmd_aggregate(args) -> int:
    inst = load_instance(args.instance)
    if args.method == "dummy":
        plan = dummy_selection(inst.n_days, args.stride)
    else:
        fs = build_day_elements(inst)
        cl = run_method(args.method, fs, clusters=args.clusters, inner_k=args.inner)
        plan = build_plan(fs, cl, args.weighted, args.strategy, seed=args.seed)
    save_instance(apply_plan(inst, plan), args.out)
    print(f"selected {plan.n_selected} days: {' '.join(map(str, plan.selected))}")
    return 0


def cmd_build_lp(args) -> int:
    _write(export_lp(build_lp(load_instance(args.instance))), args.out)
    return 0


def cmd_solve(args) -> int:
    problem = read_lp(Path(args.lp).read_text())
    sol = solve_with_highs(problem) if args.solver == "highs" else solve_lp(problem)
    print(f"status {sol.status}")
    print(f"objective {sol.objective!r}")
    print(f"iterations {sol.iterations}")
    if args.values:
        for name, v in zip(problem.var_names, sol.x):
            if v != 0:
                print(f"{name} {v!r}")
    return 0 if sol.optimal else 1


def cmd_full(args) -> int:
    inst = load_instance(args.instance)
    cfg = ExperimentConfig(args.instance, methods=(), solver=args.solver)
    x, obj, elapsed, _ = run_full(inst, cfg)
    print(f"objective {obj!r}")
    print(f"time_s {elapsed:.3f}")
    for cid, v in x.as_dict().items():
        print(f"{cid} {v!r}")
    return 0


def cmd_bench(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    report = run_experiment(cfg)
    _write(emit_report(report, "csv"), args.out)
    if args.markdown:
        sys.stdout.write(emit_report(report, "markdown"))
    failed = [r for r in report.rows if r.error]
    for r in failed:
        print(f"row {r.method}/{r.strategy}/{r.weighting} failed: {r.error}", file=sys.stderr)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aggrex", description="Representative-day aggregation for capacity expansion LPs")
    p.add_argument("--version", action="version", version=f"aggrex {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic instance")
    g.add_argument("--spec", help="JSON file with generator settings (defaults when omitted)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--csv", action="store_true", help="write time series to a side-car CSV")
    g.set_defaults(func=cmd_gen)

    f = sub.add_parser("features", help="inspect per-day clustering elements")
    f.add_argument("--instance", required=True)
    f.add_argument("--dump-sums", nargs="?", const="-", default=None, metavar="FILE",
                   help="write the day-sum vector as CSV (stdout when no file)")
    f.set_defaults(func=cmd_features)

    a = sub.add_parser("aggregate", help="select representative days and write the reduced instance")
    a.add_argument("--instance", required=True)
    a.add_argument("--method", choices=("dummy", "k", "cc", "lc", "kk"), default="k")
    a.add_argument("--strategy", choices=STRATEGIES, default="median")
    w = a.add_mutually_exclusive_group()
    w.add_argument("--weighted", dest="weighted", action="store_true", default=True)
    w.add_argument("--non-weighted", dest="weighted", action="store_false")
    a.add_argument("--clusters", type=int, default=28)
    a.add_argument("--inner", type=int, default=4, help="inner clusters for two-level methods")
    a.add_argument("--stride", type=int, default=13, help="dummy selection stride")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_aggregate)

    b = sub.add_parser("build-lp", help="write the capacity expansion LP in CPLEX LP format")
    b.add_argument("--instance", required=True)
    b.add_argument("--out", default="-")
    b.set_defaults(func=cmd_build_lp)

    s = sub.add_parser("solve", help="solve an LP file")
    s.add_argument("--lp", required=True)
    s.add_argument("--solver", choices=("builtin", "highs"), default="builtin")
    s.add_argument("--values", action="store_true", help="print nonzero variable values")
    s.set_defaults(func=cmd_solve)

    fu = sub.add_parser("full", help="solve the full-horizon reference and print investments")
    fu.add_argument("--instance", required=True)
    fu.add_argument("--solver", choices=("builtin", "highs"), default="builtin")
    fu.set_defaults(func=cmd_full)

    be = sub.add_parser("bench", help="run an experiment config and write the gap report")
    be.add_argument("--config", required=True)
    be.add_argument("--out", default="-")
    be.add_argument("--markdown", action="store_true", help="also print a markdown table")
    be.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, ValueError, OSError) as exc:
        print(f"aggrex: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
