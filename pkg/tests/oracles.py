"""Independent brute-force references shared by unit and acceptance tests."""
import itertools
import math
from fractions import Fraction

import numpy as np


def partitions(items, k):
    """All partitions of `items` into exactly k nonempty blocks."""
    items = list(items)
    if k == 0:
        if not items:
            yield []
        return
    if len(items) < k:
        return
    first, rest = items[0], items[1:]
    # first alone
    for p in partitions(rest, k - 1):
        yield [[first]] + p
    # first joins a block
    for p in partitions(rest, k):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def sse_of(x, blocks):
    total = 0.0
    for b in blocks:
        v = np.asarray([x[i] for i in b], dtype=float)
        total += float(((v - v.mean()) ** 2).sum())
    return total


def brute_kmeans_min(x, k):
    return min(sse_of(x, p) for p in partitions(range(len(x)), k))


def is_single_move_optimal(x, blocks, tol=1e-9):
    base = sse_of(x, blocks)
    for bi, b in enumerate(blocks):
        if len(b) == 1:
            continue
        for item in b:
            for ci in range(len(blocks)):
                if ci == bi:
                    continue
                moved = [list(c) for c in blocks]
                moved[bi].remove(item)
                moved[ci].append(item)
                if sse_of(x, moved) < base - tol:
                    return False
    return True


def brute_complete_linkage(D, k):
    """Naive agglomeration: clusters as sorted lists, linkage by max over member pairs.

    Ties go to the lexicographically smallest (first-member) pair.
    """
    clusters = [[i] for i in range(D.shape[0])]
    trace = []
    while len(clusters) > k:
        best = None
        for a, b in itertools.combinations(range(len(clusters)), 2):
            d = max(D[i, j] for i in clusters[a] for j in clusters[b])
            key = (d, clusters[a][0], clusters[b][0])
            if best is None or key < best[0]:
                best = (key, a, b)
        (d, _, _), a, b = best
        trace.append(d)
        clusters[a] = sorted(clusters[a] + clusters[b])
        del clusters[b]
    return sorted(tuple(c) for c in clusters), trace


def lp_vertex_oracle(c, A_ub, b_ub, n):
    """min c'x over {A_ub x <= b_ub} by enumerating basic points; x bounds folded into A_ub.

    Returns (objective, x) or None when infeasible; the caller keeps the
    region bounded.
    """
    best = None
    m = A_ub.shape[0]
    for rows in itertools.combinations(range(m), n):
        M = A_ub[list(rows)]
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        x = np.linalg.solve(M, b_ub[list(rows)])
        if np.all(A_ub @ x <= b_ub + 1e-9):
            val = float(c @ x)
            if best is None or val < best[0] - 1e-12:
                best = (val, x)
    return best


def reference_dtw(a, b):
    """Plain quadratic DP with absolute local cost."""
    n, m = len(a), len(b)
    D = [[float("inf")] * (m + 1) for _ in range(n + 1)]
    D[0][0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            D[i][j] = abs(a[i - 1] - b[j - 1]) + min(D[i - 1][j], D[i][j - 1], D[i - 1][j - 1])
    return D[n][m]


def direct_weight(size, n_days, n_clusters):
    """Round-half-away-from-zero of size / (n_days / n_clusters), floored at 1."""
    q = Fraction(size * n_clusters, n_days)
    return max(1, math.floor(q + Fraction(1, 2)))
