"""Experiment runner: full reference solve, aggregated solves, gaps and reports."""
from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cep import InvestmentVector, build_lp, extract_investments, hourly_var_count
from .cluster import run_method
from .features import build_day_elements
from .instance import Instance, load_instance
from .select import STRATEGIES, apply_plan, build_plan, dummy_selection
from .solve import SolverOptions, solve_lp, solve_with_highs

METHODS = ("dummy", "k", "cc", "lc", "kk")
WEIGHTINGS = ("w", "n", "nl")
COLUMNS = ("method", "strategy", "weighting", "clusters", "days_selected", "gap_pct",
           "t_full_s", "t_agg_s", "saving_pct")


class BenchError(ValueError):
    pass


@dataclass(frozen=True)
class GapUndefined:
    """Gap with a zero reference denominator; carries the numerator."""

    numerator: float

    def __str__(self) -> str:
        return "undefined"


def gap(x: InvestmentVector, xbar: InvestmentVector):
    """Sum of absolute investment deviations relative to the reference total."""
    if tuple(x.ids) != tuple(xbar.ids):
        raise BenchError(f"candidate ids differ: {x.ids} vs {xbar.ids}")
    a, b = x.as_array(), xbar.as_array()
    num = float(np.abs(a - b).sum())
    den = float(b.sum())
    if den == 0.0:
        return 0.0 if float(np.abs(a).sum()) == 0.0 else GapUndefined(float(np.abs(a).sum()))
    return num / den


@dataclass(frozen=True)
class ExperimentConfig:
    instance: str
    methods: tuple[str, ...] = ("dummy", "k")
    strategies: tuple[str, ...] = ("median",)
    weighting: tuple[str, ...] = ("w", "n")
    clusters: int = 28
    outer: int = 7
    inner: int = 4
    seed: int = 0
    dummy_stride: int = 13
    solver: str = "builtin"
    solver_options: dict = field(default_factory=dict)

    def __post_init__(self):
        for m in self.methods:
            if m not in METHODS:
                raise BenchError(f"unknown method {m!r}")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise BenchError(f"unknown strategy {s!r}")
        for w in self.weighting:
            if w not in WEIGHTINGS:
                raise BenchError(f"unknown weighting {w!r}")
        if "nl" in self.weighting and "w" not in self.weighting:
            raise BenchError("weighting 'nl' needs a companion 'w' run")
        if self.solver not in ("builtin", "highs"):
            raise BenchError(f"unknown solver {self.solver!r}")
        if self.clusters < 1 or self.outer < 1 or self.inner < 1:
            raise BenchError("cluster counts must be positive")

    @classmethod
    def from_dict(cls, raw: dict, base: Path | None = None) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(raw) - known
        if extra:
            raise BenchError(f"unknown config keys: {sorted(extra)}")
        if "instance" not in raw:
            raise BenchError("config needs an 'instance' path")
        kw = dict(raw)
        for key in ("methods", "strategies", "weighting"):
            if key in kw:
                kw[key] = tuple(kw[key])
        inst = Path(kw["instance"])
        if base is not None and not inst.is_absolute():
            kw["instance"] = str(base / inst)
        return cls(**kw)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        return cls.from_dict(json.loads(path.read_text()), base=path.parent)


@dataclass
class GapRow:
    method: str
    strategy: str
    weighting: str
    clusters: int
    days_selected: int = 0
    investments: InvestmentVector | None = None
    gap: float | GapUndefined | None = None
    t_full: float = 0.0
    t_agg: float = 0.0
    objective: float = float("nan")
    hourly_vars: int = 0
    seed: int | None = None
    error: str | None = None

    @property
    def saving(self) -> float:
        return 1.0 - self.t_agg / self.t_full if self.t_full > 0 else float("nan")

    def key(self):
        return (self.method, self.strategy, self.weighting)


@dataclass
class GapReport:
    rows: list[GapRow]
    reference: InvestmentVector
    t_full: float
    objective_full: float
    hourly_vars_full: int


def _solve(instance: Instance, config: ExperimentConfig):
    """Build and solve; returns (problem, solution, wall time around both)."""
    t0 = time.perf_counter()
    problem = build_lp(instance)
    if config.solver == "highs":
        sol = solve_with_highs(problem)
    else:
        sol = solve_lp(problem, SolverOptions(**config.solver_options))
    return problem, sol, time.perf_counter() - t0


def run_full(instance: Instance, config: ExperimentConfig):
    problem, sol, elapsed = _solve(instance, config)
    return extract_investments(problem, sol), sol.objective, elapsed, hourly_var_count(problem)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("AGGREX_THREADS", "1")))
    except ValueError:
        return 1


def _plan_jobs(config: ExperimentConfig):
    jobs = []
    for method in config.methods:
        if method == "dummy":
            jobs.append(("dummy", "-", "n"))
            continue
        for strategy in config.strategies:
            for w in config.weighting:
                jobs.append((method, strategy, w))
    return jobs


def _cluster_count(config: ExperimentConfig, method: str) -> int:
    return config.clusters if method == "k" else config.outer * config.inner


def run_experiment(config: ExperimentConfig, instance: Instance | None = None) -> GapReport:
    """Solve the full instance once, then every configured aggregation."""
    inst = load_instance(config.instance) if instance is None else instance
    reference, obj_full, t_full, hv_full = run_full(inst, config)
    features = build_day_elements(inst)
    clusterings: dict = {}

    def clustering(method, k, outer):
        # filled before rows are dispatched so workers only read the cache
        key = (method, k, outer)
        if key not in clusterings:
            clusterings[key] = run_method(method, features, clusters=k, outer_k=outer, inner_k=config.inner)
        return clusterings[key]

    def warm(jobs):
        for method, _, _, *size in jobs:
            if method == "dummy":
                continue
            k, outer = size if size else (_cluster_count(config, method), config.outer if method != "k" else None)
            try:
                clustering(method, k, outer)
            except Exception:
                pass  # the row reports it

    def run_row(method, strategy, weighting, k=None, outer=None):
        if k is None:
            k = _cluster_count(config, method)
            outer = config.outer if method != "k" else None
        row = GapRow(method, strategy, weighting, k, t_full=t_full,
                     seed=config.seed if strategy == "random" else None)
        try:
            if method == "dummy":
                plan = dummy_selection(inst.n_days, config.dummy_stride)
                row.clusters = plan.n_selected
            else:
                cl = clustering(method, k, outer)
                row.clusters = cl.k
                plan = build_plan(features, cl, weighting == "w", strategy, seed=config.seed)
            agg = apply_plan(inst, plan)
            row.days_selected = plan.n_selected
            problem, sol, row.t_agg = _solve(agg, config)
            row.hourly_vars = hourly_var_count(problem)
            row.objective = sol.objective
            row.investments = extract_investments(problem, sol, reference.ids)
            row.gap = gap(row.investments, reference)
        except Exception as exc:  # recorded per row, other rows proceed
            row.error = f"{type(exc).__name__}: {exc}"
        return row

    jobs = [j for j in _plan_jobs(config) if j[2] != "nl"]
    warm(jobs)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda j: run_row(*j), jobs))
    # non-weighted reruns sized by the matching weighted run
    by_key = {r.key(): r for r in rows}
    nl_jobs = []
    for method, strategy, w in _plan_jobs(config):
        if w != "nl":
            continue
        weighted = by_key.get((method, strategy, "w"))
        if weighted is None or weighted.error:
            rows.append(GapRow(method, strategy, "nl", 0, t_full=t_full,
                               error="companion weighted run unavailable"))
            continue
        nl_jobs.append((method, strategy, "nl", weighted.days_selected, None))
    warm(nl_jobs)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows += list(pool.map(lambda j: run_row(*j), nl_jobs))
    rows.sort(key=GapRow.key)
    return GapReport(rows, reference, t_full, obj_full, hv_full)


def _fmt_gap(g) -> str:
    if g is None:
        return "error"
    if isinstance(g, GapUndefined):
        return str(g)
    return f"{100.0 * g:.1f}"


def report_records(report: GapReport, include_timing: bool = True) -> list[dict]:
    out = []
    for r in report.rows:
        out.append({
            "method": r.method,
            "strategy": r.strategy,
            "weighting": r.weighting,
            "clusters": str(r.clusters),
            "days_selected": str(r.days_selected),
            "gap_pct": _fmt_gap(r.gap),
            "t_full_s": f"{r.t_full:.3f}" if include_timing else "-",
            "t_agg_s": f"{r.t_agg:.3f}" if include_timing and r.error is None else "-",
            "saving_pct": f"{100.0 * r.saving:.1f}" if include_timing and r.error is None else "-",
        })
    return out


def emit_report(report: GapReport | None, fmt: str = "csv", include_timing: bool = True) -> str:
    """Render `report` as CSV or as a markdown table with the fixed column order."""
    records = report_records(report, include_timing) if report is not None else []
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
        lines += ["| " + " | ".join(rec[c] for c in COLUMNS) + " |" for rec in records]
        return "\n".join(lines) + "\n"
    raise BenchError(f"unknown report format {fmt!r}")


def summarize(rows, by: str = "strategy") -> dict[str, float]:
    """Mean gap per value of `by` (strategy, weighting or method); undefined gaps are skipped."""
    if by not in ("strategy", "weighting", "method"):
        raise BenchError(f"cannot group by {by!r}")
    groups: dict[str, list[float]] = {}
    for r in rows:
        if isinstance(r.gap, float) or isinstance(r.gap, int):
            groups.setdefault(getattr(r, by), []).append(float(r.gap))
    return {k: sum(v) / len(v) for k, v in sorted(groups.items())}
