"""From clusters to selected days, and from selected days to an aggregated instance."""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .cluster import Clustering, median_rank_order
from .features import FeatureSet
from .instance import ElectricVehicleFleet, Instance, _series

STRATEGIES = ("min", "max", "median", "cmean", "random", "medianmaxmin")


class SelectionError(ValueError):
    pass


@dataclass(frozen=True)
class SelectionPlan:
    selected: tuple[int, ...]
    per_cluster: tuple[tuple[int, tuple[int, ...]], ...]
    strategy_tag: str
    weighted: bool

    def __post_init__(self):
        sel = list(self.selected)
        if any(b <= a for a, b in zip(sel, sel[1:])):
            raise SelectionError("selected days must be strictly increasing")
        for weight, chosen in self.per_cluster:
            if weight < 1:
                raise SelectionError("cluster weights must be positive")
            if not self.weighted and len(chosen) != 1:
                raise SelectionError("non-weighted plans choose one day per cluster")
            if len(set(chosen)) != len(chosen):
                raise SelectionError("a cluster chose the same day twice")

    @property
    def n_selected(self) -> int:
        return len(self.selected)


def _round_half_up(q: Fraction) -> int:
    # q >= 0 here, so half-away-from-zero is floor(q + 1/2)
    return int((q + Fraction(1, 2)).__floor__())


def cluster_weights(clustering: Clustering, n_days: int | None = None, n_clusters: int | None = None) -> list[int]:
    """``max(1, round(size / frequency))`` with ``frequency = n_days / n_clusters``."""
    n_days = clustering.n_days if n_days is None else n_days
    n_clusters = clustering.k if n_clusters is None else n_clusters
    if n_clusters <= 0:
        raise SelectionError("number of clusters must be positive")
    return [weight_for(len(c), n_days, n_clusters) for c in clustering.clusters]


def weight_for(size: int, n_days: int, n_clusters: int) -> int:
    if n_clusters <= 0 or n_days <= 0:
        raise SelectionError("n_days and number of clusters must be positive")
    frequency = Fraction(n_days, n_clusters)
    return max(1, _round_half_up(Fraction(size) / frequency))


def _median_order(days: list[int], sums: np.ndarray) -> list[int]:
    return [days[i] for i in median_rank_order(sums)]


def select_from_cluster(features: FeatureSet, cluster, w: int, strategy: str, seed=0) -> list[int]:
    """Pick `w` days of `cluster` (whole cluster when it is smaller), in selection order."""
    days = [int(d) for d in cluster]
    if not days:
        raise SelectionError("cannot select from an empty cluster")
    if strategy not in STRATEGIES:
        raise SelectionError(f"unknown strategy {strategy!r}")
    if w < 1:
        raise SelectionError("w must be at least 1")
    w = min(w, len(days))
    sums = features.day_sums[days]
    asc = [days[i] for i in sorted(range(len(days)), key=lambda i: (sums[i], days[i]))]
    desc = [days[i] for i in sorted(range(len(days)), key=lambda i: (-sums[i], days[i]))]
    if strategy == "min":
        return asc[:w]
    if strategy == "max":
        return desc[:w]
    if strategy == "median":
        return _median_order(days, sums)[:w]
    if strategy == "cmean":
        el = features.elements[days]
        mean = el.mean(axis=0)
        # per-series Euclidean distance over the hours, summed over series
        dist = np.sqrt(((el - mean) ** 2).sum(axis=2)).sum(axis=1)
        order = sorted(range(len(days)), key=lambda i: (dist[i], days[i]))
        return [days[i] for i in order[:w]]
    if strategy == "random":
        rng = np.random.default_rng(seed)
        return [int(d) for d in rng.choice(np.array(days), size=w, replace=False)]
    # medianmaxmin
    chosen: list[int] = []
    iters = [iter(_median_order(days, sums)), iter(desc), iter(asc)]
    while len(chosen) < w:
        for it in iters:
            for d in it:
                if d not in chosen:
                    chosen.append(d)
                    break
            if len(chosen) == w:
                break
    return chosen


def build_plan(features: FeatureSet, clustering: Clustering, weighted: bool, strategy: str,
               seed: int = 0) -> SelectionPlan:
    weights = cluster_weights(clustering) if weighted else [1] * clustering.k
    per_cluster = []
    for ci, (members, w) in enumerate(zip(clustering.clusters, weights)):
        chosen = select_from_cluster(features, members, w, strategy, seed=[seed, ci])
        per_cluster.append((w, tuple(chosen)))
    selected = tuple(sorted(d for _, chosen in per_cluster for d in chosen))
    return SelectionPlan(selected, tuple(per_cluster), strategy, weighted)


def dummy_selection(n_days: int, stride: int = 13) -> SelectionPlan:
    """Every `stride`-th day (indices stride-1, 2*stride-1, ...); the last day when none fit."""
    if n_days < 1 or stride < 1:
        raise SelectionError("n_days and stride must be positive")
    days = tuple(range(stride - 1, n_days, stride)) or (n_days - 1,)
    return SelectionPlan(days, tuple((1, (d,)) for d in days), "dummy", False)


def apply_plan(instance: Instance, plan: SelectionPlan) -> Instance:
    """Concatenate the selected days of every hourly series, in chronological order."""
    L = instance.day_length
    days = np.asarray(plan.selected, dtype=np.intp)
    if days.size == 0:
        raise SelectionError("plan selects no days")
    if days.min() < 0 or days.max() >= instance.n_days:
        raise SelectionError(f"plan day index outside [0, {instance.n_days})")
    hours = (days[:, None] * L + np.arange(L)[None, :]).ravel()
    position = {int(d): k for k, d in enumerate(days.tolist())}

    def cut(arr):
        if isinstance(arr, np.ndarray):
            return _series(arr[hours])
        return arr

    def remap_events(ev: ElectricVehicleFleet):
        events = []
        for deadline, energy in ev.driving_events:
            day, offset = divmod(deadline - 1, L)
            if day in position:
                events.append((position[day] * L + offset + 1, energy))
        return replace(ev, driving_events=tuple(events))

    return replace(
        instance,
        name=instance.name,
        horizon=len(hours),
        external_areas=tuple(replace(x, price=cut(x.price)) for x in instance.external_areas),
        units=tuple(replace(u, fuel_price=cut(u.fuel_price), availability=cut(u.availability))
                    for u in instance.units),
        res_units=tuple(replace(r, profile=cut(r.profile)) for r in instance.res_units),
        lines=tuple(replace(ln, availability=cut(ln.availability)) for ln in instance.lines),
        evs=tuple(remap_events(ev) for ev in instance.evs),
        demands=tuple(replace(d, series=cut(d.series)) for d in instance.demands),
        cost_period=instance.cost_period,
    )
