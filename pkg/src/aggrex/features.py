"""Per-day clustering elements and the three day-to-day distances."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .instance import Instance


class FeatureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FeatureSet:
    """Day elements of shape (n_days, n_series, day_length) plus their sums."""

    n_days: int
    day_length: int
    series_ids: tuple[str, ...]
    elements: np.ndarray
    day_sums: np.ndarray

    @classmethod
    def from_elements(cls, elements, series_ids=None) -> "FeatureSet":
        el = np.array(elements, dtype=float)
        if el.ndim == 2:
            el = el[:, None, :]
        if el.ndim != 3:
            raise FeatureError("elements must be (days, series, hours)")
        el.flags.writeable = False
        # correctly rounded, independent of summation order
        sums = np.array([math.fsum(day.ravel()) for day in el])
        sums.flags.writeable = False
        ids = tuple(series_ids) if series_ids is not None else tuple(f"s{i}" for i in range(el.shape[1]))
        return cls(el.shape[0], el.shape[2], ids, el, sums)

    @property
    def flat(self) -> np.ndarray:
        return self.elements.reshape(self.n_days, -1)

    def subset(self, days) -> "FeatureSet":
        return FeatureSet.from_elements(self.elements[np.asarray(days, dtype=np.intp)], self.series_ids)


def build_day_elements(instance: Instance) -> FeatureSet:
    """Stack every fluctuating series of `instance` into per-day elements.

    Rows, in order: demands (negated), RES profile times capacity, external
    prices, unit fuel prices, unit availabilities, line availabilities.
    Scalar fuel prices and missing availabilities become constant rows.
    """
    H, L = instance.horizon, instance.day_length
    rows: list[np.ndarray] = []
    ids: list[str] = []
    for d in instance.demands:
        rows.append(-np.asarray(d.series))
        ids.append(f"demand:{d.id}")
    for r in instance.res_units:
        rows.append(np.asarray(r.profile) * r.capacity)
        ids.append(f"res:{r.id}")
    for x in instance.external_areas:
        rows.append(np.asarray(x.price))
        ids.append(f"price:{x.id}")
    for u in instance.units:
        rows.append(np.asarray(u.fuel_series(H), dtype=float))
        ids.append(f"fuel:{u.id}")
    for u in instance.units:
        rows.append(np.asarray(u.availability_series(H), dtype=float))
        ids.append(f"avail:{u.id}")
    for ln in instance.lines:
        rows.append(np.asarray(ln.availability_series(H), dtype=float))
        ids.append(f"lineavail:{ln.id}")
    n_days = H // L
    if rows:
        stacked = np.vstack(rows)  # series x hours
        elements = stacked.reshape(len(rows), n_days, L).transpose(1, 0, 2)
    else:
        elements = np.zeros((n_days, 0, L))
    return FeatureSet.from_elements(elements, ids)


def _pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise FeatureError(f"shape mismatch {a.shape} vs {b.shape}")
    return a, b


def sq_euclidean(a, b) -> float:
    a, b = _pair(a, b)
    diff = (a - b).ravel()
    return float(diff @ diff)


def dtw_distance(a, b) -> float:
    """DTW per series (absolute local cost, full band), summed over series."""
    a, b = _pair(a, b)
    if a.ndim == 1:
        return float(kernels.dtw(a, b))
    return float(kernels.dtw_multi(a.reshape(-1, a.shape[-1]), b.reshape(-1, b.shape[-1])))


def correlation_distance(a, b) -> float:
    """1 - Pearson correlation of the flattened elements.

    Identical elements are at distance 0; otherwise a zero-variance element is
    at distance 1 from everything.
    """
    a, b = _pair(a, b)
    x, y = a.ravel(), b.ravel()
    if np.array_equal(x, y):
        return 0.0
    xc, yc = x - x.mean(), y - y.mean()
    sx, sy = np.sqrt(xc @ xc), np.sqrt(yc @ yc)
    if sx == 0.0 or sy == 0.0:
        return 1.0
    r = (xc @ yc) / (sx * sy)
    return float(min(2.0, max(0.0, 1.0 - r)))


def pairwise(features, metric: str) -> np.ndarray:
    """Full distance matrix between the days of `features` under `metric`."""
    el = features.elements if isinstance(features, FeatureSet) else np.asarray(features, dtype=float)
    n = el.shape[0]
    if metric == "sqeuclidean":
        return kernels.pairwise_sqeuclid(el.reshape(n, -1))
    if metric == "dtw":
        return kernels.pairwise_dtw(el.reshape(n, -1, el.shape[-1]))
    if metric == "correlation":
        F = el.reshape(n, -1)
        D = np.empty((n, n))
        for i in range(n):
            D[i, i] = 0.0
            for j in range(i + 1, n):
                D[i, j] = D[j, i] = correlation_distance(F[i], F[j])
        return D
    raise FeatureError(f"unknown metric {metric!r}")


def day_sums_csv(features: FeatureSet) -> str:
    lines = ["day,sum"]
    lines += [f"{d},{s!r}" for d, s in enumerate(features.day_sums.tolist())]
    return "\n".join(lines) + "\n"
