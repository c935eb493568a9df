"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Both modules expose the same functions with the same tie-breaking, so the
package behaves identically whichever one is imported.
"""
import numpy as np


def dtw(a, b):
    """Classic DTW with absolute-difference local cost and no warping window."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n, m = len(a), len(b)
    prev = np.full(m + 1, np.inf)
    prev[0] = 0.0
    for i in range(n):
        cur = np.empty(m + 1)
        cur[0] = np.inf
        ai = a[i]
        for j in range(m):
            best = prev[j]
            if prev[j + 1] < best:
                best = prev[j + 1]
            if cur[j] < best:
                best = cur[j]
            cur[j + 1] = abs(ai - b[j]) + best
        prev = cur
    return float(prev[m])


def dtw_multi(A, B):
    """Sum of per-row DTW distances of two (series x hours) elements."""
    total = 0.0
    for s in range(A.shape[0]):
        total += dtw(A[s], B[s])
    return total


def pairwise_dtw(X):
    """Symmetric matrix of `dtw_multi` over elements X[i] (shape n x series x hours)."""
    X = np.ascontiguousarray(X, dtype=float)
    n = X.shape[0]
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = dtw_multi(X[i], X[j])
    return D


def pairwise_sqeuclid(F):
    """Squared Euclidean distances between rows of the flat matrix F."""
    F = np.ascontiguousarray(F, dtype=float)
    n = F.shape[0]
    D = np.zeros((n, n))
    for i in range(n):
        diff = F[i + 1:] - F[i]
        D[i, i + 1:] = np.einsum("ij,ij->i", diff, diff)
        D[i + 1:, i] = D[i, i + 1:]
    return D


def complete_linkage(D, k):
    """Agglomerate singletons with complete linkage until `k` clusters remain.

    Returns (labels, merges): labels[i] is the slot (lowest original index) of
    point i's cluster and merges lists (kept_slot, absorbed_slot, distance).
    Ties go to the lexicographically lowest slot pair.
    """
    W = np.array(D, dtype=float, copy=True)
    n = W.shape[0]
    np.fill_diagonal(W, np.inf)
    labels = np.arange(n)
    merges = []
    active = n
    while active > k:
        flat = int(np.argmin(W))
        i, j = divmod(flat, n)
        if i > j:
            i, j = j, i
        merges.append((i, j, float(W[i, j])))
        row = np.maximum(W[i], W[j])
        row[i] = np.inf
        W[i, :] = row
        W[:, i] = row
        W[j, :] = np.inf
        W[:, j] = np.inf
        labels[labels == j] = i
        active -= 1
    return labels, merges
