"""Day clustering: k-means, fuzzy c-means, complete-linkage HAC and the k/cc/lc/kk pipelines."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .features import FeatureSet, pairwise


class ClusteringError(ValueError):
    pass


@dataclass(frozen=True)
class Clustering:
    """A partition of ``range(n_days)``.

    ``clusters`` are sorted tuples ordered by their first day; ``lineage``
    gives the outer cluster of each final cluster for two-level methods.
    """

    n_days: int
    clusters: tuple[tuple[int, ...], ...]
    lineage: tuple[int, ...] | None = None
    method_tag: str = "k"
    history: tuple[float, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        seen = [d for c in self.clusters for d in c]
        if any(len(c) == 0 for c in self.clusters):
            raise ClusteringError("empty cluster")
        if sorted(seen) != list(range(self.n_days)):
            raise ClusteringError("clusters do not partition the days")
        if self.lineage is not None and len(self.lineage) != len(self.clusters):
            raise ClusteringError("lineage length differs from cluster count")

    @property
    def k(self) -> int:
        return len(self.clusters)

    def labels(self) -> np.ndarray:
        out = np.empty(self.n_days, dtype=np.intp)
        for ci, members in enumerate(self.clusters):
            out[list(members)] = ci
        return out

    @classmethod
    def from_labels(cls, labels, method_tag="k", lineage_of_label=None, history=()) -> "Clustering":
        labels = np.asarray(labels)
        groups: dict[int, list[int]] = {}
        for day, lab in enumerate(labels.tolist()):
            groups.setdefault(lab, []).append(day)
        order = sorted(groups, key=lambda lab: groups[lab][0])
        clusters = tuple(tuple(groups[lab]) for lab in order)
        lineage = None
        if lineage_of_label is not None:
            lineage = tuple(int(lineage_of_label[lab]) for lab in order)
        return cls(len(labels), clusters, lineage, method_tag, tuple(history))


@dataclass(frozen=True)
class FuzzyMembership:
    matrix: np.ndarray
    history: tuple[float, ...] = ()

    def crisp(self) -> np.ndarray:
        """Argmax assignment; ties resolve to the lowest cluster index."""
        return np.argmax(self.matrix, axis=1)


def _flat(features) -> np.ndarray:
    if isinstance(features, FeatureSet):
        return features.flat
    arr = np.asarray(features, dtype=float)
    return arr.reshape(arr.shape[0], -1)


def _sq_to_centroids(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def initial_partition(n_days: int, k: int) -> Clustering:
    """Contiguous blocks; the first ``n_days % k`` blocks are one day longer."""
    if not (1 <= k <= n_days):
        raise ClusteringError(f"k={k} outside [1, {n_days}]")
    base, extra = divmod(n_days, k)
    labels = np.empty(n_days, dtype=np.intp)
    start = 0
    for c in range(k):
        size = base + (1 if c < extra else 0)
        labels[start:start + size] = c
        start += size
    return Clustering.from_labels(labels)


def sse(X: np.ndarray, labels: np.ndarray) -> float:
    total = 0.0
    for lab in np.unique(labels):
        pts = X[labels == lab]
        diff = pts - pts.mean(axis=0)
        total += float(np.einsum("ij,ij->", diff, diff))
    return total


def _repair_empty(X, labels, k):
    """Move the element farthest from its own centroid into each empty cluster."""
    counts = np.bincount(labels, minlength=k)
    while (counts == 0).any():
        C = np.zeros((k, X.shape[1]))
        np.add.at(C, labels, X)
        C[counts > 0] /= counts[counts > 0, None]
        diff = X - C[labels]
        own = np.einsum("ij,ij->i", diff, diff)
        own[counts[labels] <= 1] = -1.0
        labels = labels.copy()
        labels[int(np.argmax(own))] = int(np.argmax(counts == 0))
        counts = np.bincount(labels, minlength=k)
    return labels, counts


def _lloyd(X, labels, k, max_iter, tol):
    """Lloyd iterations on integer labels in [0, k); returns (labels, objective history)."""
    history = []
    prev_obj = np.inf
    for _ in range(max_iter):
        labels, counts = _repair_empty(X, labels, k)
        C = np.zeros((k, X.shape[1]))
        np.add.at(C, labels, X)
        C /= counts[:, None]
        diff = X - C[labels]
        obj = float(np.einsum("ij,ij->", diff, diff))
        history.append(obj)
        new = np.argmin(_sq_to_centroids(X, C), axis=1)
        stable = np.array_equal(new, labels)
        small = np.isfinite(prev_obj) and prev_obj - obj <= tol * max(prev_obj, 1e-300)
        labels = new
        prev_obj = obj
        if stable or small:
            break
    labels, _ = _repair_empty(X, labels, k)
    return labels, history


def _hartigan(X, labels, k, history, max_passes=100):
    """Single-point moves that strictly lower the SSE, scanned in day order."""
    labels = labels.copy()
    n = X.shape[0]
    counts = np.bincount(labels, minlength=k).astype(float)
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, labels, X)
    for _ in range(max_passes):
        moved = False
        for i in range(n):
            a = labels[i]
            if counts[a] <= 1:
                continue
            C = sums / np.maximum(counts, 1)[:, None]
            d = X[i] - C
            dist = np.einsum("ij,ij->i", d, d)
            remove_gain = counts[a] / (counts[a] - 1) * dist[a]
            add_cost = counts / (counts + 1) * dist
            add_cost[a] = np.inf
            b = int(np.argmin(add_cost))
            if add_cost[b] < remove_gain * (1 - 1e-12) - 1e-12:
                labels[i] = b
                counts[a] -= 1
                counts[b] += 1
                sums[a] -= X[i]
                sums[b] += X[i]
                history.append(sse(X, labels))
                moved = True
        if not moved:
            break
    return labels


def kmeans(features, k: int, init: Clustering | None = None, max_iter: int = 100, tol: float = 1e-6,
           method_tag: str = "k") -> Clustering:
    """k-means with squared Euclidean distance from a given crisp partition.

    Lloyd iterations run to convergence, then single-point moves polish the
    partition so that no single reassignment can lower the objective.  The
    objective after each update is kept in ``Clustering.history``.
    """
    X = _flat(features)
    n = X.shape[0]
    if init is None:
        init = initial_partition(n, k)
    if init.n_days != n or init.k != k:
        raise ClusteringError("init partition does not match features / k")
    labels = init.labels()
    if k == 1:
        return Clustering.from_labels(labels, method_tag, history=(sse(X, labels),))
    labels, history = _lloyd(X, labels, k, max_iter, tol)
    history.append(sse(X, labels))
    labels = _hartigan(X, labels, k, history)
    return Clustering.from_labels(labels, method_tag, history=history)


def fuzzy_cmeans(features, k: int, m: float = 2.0, init: Clustering | None = None, max_iter: int = 100,
                 tol: float = 1e-6) -> FuzzyMembership:
    """Standard fuzzy c-means seeded from the crisp memberships of `init`."""
    if m <= 1.0:
        raise ClusteringError("fuzzifier must exceed 1")
    X = _flat(features)
    n = X.shape[0]
    if init is None:
        init = initial_partition(n, k)
    U = np.zeros((n, k))
    U[np.arange(n), init.labels()] = 1.0
    if k == 1:
        return FuzzyMembership(U)
    history = []
    for _ in range(max_iter):
        W = U ** m
        mass = W.sum(axis=0)
        C = (W.T @ X) / np.where(mass > 0, mass, 1.0)[:, None]
        D = _sq_to_centroids(X, C)
        new = np.empty_like(U)
        zero = D <= 0.0
        hit = zero.any(axis=1)
        if hit.any():
            new[hit] = zero[hit] / zero[hit].sum(axis=1, keepdims=True)
        rest = ~hit
        if rest.any():
            Dr = D[rest] / D[rest].min(axis=1, keepdims=True)
            inv = Dr ** (-1.0 / (m - 1.0))
            new[rest] = inv / inv.sum(axis=1, keepdims=True)
        change = float(np.abs(new - U).max())
        U = new
        history.append(change)
        if change < tol:
            break
    return FuzzyMembership(U, tuple(history))


def hac(features, k: int, distance: str = "dtw", linkage: str = "complete", method_tag: str = "hac",
        matrix: np.ndarray | None = None) -> Clustering:
    """Agglomerate singletons under complete linkage until `k` clusters remain."""
    if linkage != "complete":
        raise ClusteringError(f"unsupported linkage {linkage!r}")
    D = pairwise(features, distance) if matrix is None else matrix
    n = D.shape[0]
    if not (1 <= k <= n):
        raise ClusteringError(f"k={k} outside [1, {n}]")
    labels, merges = kernels.complete_linkage(D, k)
    out = Clustering.from_labels(labels, method_tag)
    object.__setattr__(out, "history", tuple(m[2] for m in merges))
    return out


def _two_level(outer_labels, inner_fn, features: FeatureSet, tag: str) -> Clustering:
    n = features.n_days
    final = np.empty(n, dtype=np.intp)
    lineage = {}
    next_label = 0
    for outer_id, lab in enumerate(sorted(set(outer_labels.tolist()),
                                          key=lambda v: int(np.argmax(outer_labels == v)))):
        members = np.flatnonzero(outer_labels == lab)
        inner = inner_fn(features.subset(members))
        for local in inner.clusters:
            final[members[list(local)]] = next_label
            lineage[next_label] = outer_id
            next_label += 1
    return Clustering.from_labels(final, tag, lineage)


def k_means_pipeline(features: FeatureSet, k: int = 28) -> Clustering:
    """Method ``k``: k-means from the contiguous initial partition."""
    return kmeans(features, k, initial_partition(features.n_days, k), method_tag="k")


def cluster_clustering(features: FeatureSet, outer_k: int = 7, inner_k: int = 4) -> Clustering:
    """Method ``cc``: outer k-means, then complete-linkage DTW HAC inside each outer cluster."""
    outer = kmeans(features, outer_k, initial_partition(features.n_days, outer_k))
    return _two_level(outer.labels(), lambda sub: hac(sub, min(inner_k, sub.n_days), "dtw"), features, "cc")


def level_correlation(features: FeatureSet, outer_k: int = 7, inner_k: int = 4) -> Clustering:
    """Method ``lc``: fuzzy c-means made crisp by argmax, then correlation HAC per outer cluster."""
    fuzzy = fuzzy_cmeans(features, outer_k, init=initial_partition(features.n_days, outer_k))
    return _two_level(fuzzy.crisp(), lambda sub: hac(sub, min(inner_k, sub.n_days), "correlation"),
                      features, "lc")


def median_rank_order(sums: np.ndarray) -> list[int]:
    """Positions ordered by distance of their sum-rank from the median rank, lower rank first on ties."""
    order = sorted(range(len(sums)), key=lambda i: (sums[i], i))
    mid = (len(order) - 1) // 2
    out = [order[mid]]
    for step in range(1, len(order)):
        for r in (mid - step, mid + step):
            if 0 <= r < len(order):
                out.append(order[r])
    return out


def kk_seeds(features: FeatureSet, inner_k: int) -> list[int]:
    """Seed positions for the inner k-means of ``kk``: median, max, min, closest to mean, then the cycle."""
    sums = features.day_sums
    n = features.n_days
    med = median_rank_order(sums)
    desc = sorted(range(n), key=lambda i: (-sums[i], i))
    asc = sorted(range(n), key=lambda i: (sums[i], i))
    X = features.flat
    d = X - X.mean(axis=0)
    closest = int(np.argmin(np.einsum("ij,ij->i", d, d)))
    seeds: list[int] = []
    for cand in [med[0], desc[0], asc[0], closest]:
        if cand not in seeds:
            seeds.append(cand)
    iters = [iter(med), iter(desc), iter(asc)]
    while len(seeds) < min(inner_k, n):
        for it in iters:
            for cand in it:
                if cand not in seeds:
                    seeds.append(cand)
                    break
            if len(seeds) >= min(inner_k, n):
                break
    return seeds[:min(inner_k, n)]


def _kk_inner(sub: FeatureSet, inner_k: int) -> Clustering:
    seeds = kk_seeds(sub, inner_k)
    X = sub.flat
    D = _sq_to_centroids(X, X[seeds])
    labels = np.argmin(D, axis=1)
    used = sorted(set(labels.tolist()))
    remap = {old: new for new, old in enumerate(used)}
    labels = np.array([remap[v] for v in labels.tolist()], dtype=np.intp)
    init = Clustering.from_labels(labels)
    return kmeans(sub, init.k, init)


def kk_means(features: FeatureSet, outer_k: int = 7, inner_k: int = 4) -> Clustering:
    """Method ``kk``: outer k-means, inner k-means seeded at median/max/min/mean-closest days."""
    outer = kmeans(features, outer_k, initial_partition(features.n_days, outer_k))
    return _two_level(outer.labels(), lambda sub: _kk_inner(sub, inner_k), features, "kk")


def run_method(method: str, features: FeatureSet, clusters: int = 28, outer_k: int | None = None,
               inner_k: int = 4) -> Clustering:
    """Dispatch a method tag; two-level methods default to ``clusters // inner_k`` outer clusters."""
    n = features.n_days
    if method == "k":
        return k_means_pipeline(features, min(clusters, n))
    if outer_k is None:
        outer_k = max(1, clusters // inner_k)
    outer_k = min(outer_k, n)
    if method == "cc":
        return cluster_clustering(features, outer_k, inner_k)
    if method == "lc":
        return level_correlation(features, outer_k, inner_k)
    if method == "kk":
        return kk_means(features, outer_k, inner_k)
    raise ClusteringError(f"unknown clustering method {method!r}")
