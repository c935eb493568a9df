# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled distance and linkage kernels; see ``_pykernels`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef double _dtw(const double[:] a, const double[:] b, double* prev, double* cur) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0], i, j
    cdef double best, ai
    cdef double* tmp
    prev[0] = 0.0
    for j in range(1, m + 1):
        prev[j] = INFINITY
    for i in range(n):
        cur[0] = INFINITY
        ai = a[i]
        for j in range(m):
            best = prev[j]
            if prev[j + 1] < best:
                best = prev[j + 1]
            if cur[j] < best:
                best = cur[j]
            cur[j + 1] = fabs(ai - b[j]) + best
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m]


def dtw(a, b):
    cdef const double[:] av = np.ascontiguousarray(a, dtype=float)
    cdef const double[:] bv = np.ascontiguousarray(b, dtype=float)
    cdef Py_ssize_t m = bv.shape[0]
    cdef double* buf = <double*> malloc(2 * (m + 1) * sizeof(double))
    cdef double out
    try:
        out = _dtw(av, bv, buf, buf + m + 1)
    finally:
        free(buf)
    return out


cdef double _dtw_multi(const double[:, :] A, const double[:, :] B, double* buf) noexcept nogil:
    cdef Py_ssize_t s, m = B.shape[1]
    cdef double total = 0.0
    for s in range(A.shape[0]):
        total += _dtw(A[s], B[s], buf, buf + m + 1)
    return total


def dtw_multi(A, B):
    cdef const double[:, :] Av = np.ascontiguousarray(A, dtype=float)
    cdef const double[:, :] Bv = np.ascontiguousarray(B, dtype=float)
    cdef Py_ssize_t m = Bv.shape[1]
    cdef double* buf = <double*> malloc(2 * (m + 1) * sizeof(double))
    cdef double out
    try:
        out = _dtw_multi(Av, Bv, buf)
    finally:
        free(buf)
    return out


def pairwise_dtw(X):
    cdef const double[:, :, :] Xv = np.ascontiguousarray(X, dtype=float)
    cdef Py_ssize_t n = Xv.shape[0], m = Xv.shape[2], i, j
    D = np.zeros((n, n))
    cdef double[:, :] Dv = D
    cdef double* buf = <double*> malloc(2 * (m + 1) * sizeof(double))
    cdef double d
    try:
        with nogil:
            for i in range(n):
                for j in range(i + 1, n):
                    d = _dtw_multi(Xv[i], Xv[j], buf)
                    Dv[i, j] = d
                    Dv[j, i] = d
    finally:
        free(buf)
    return D


def pairwise_sqeuclid(F):
    cdef const double[:, :] Fv = np.ascontiguousarray(F, dtype=float)
    cdef Py_ssize_t n = Fv.shape[0], p = Fv.shape[1], i, j, k
    D = np.zeros((n, n))
    cdef double[:, :] Dv = D
    cdef double acc, t
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                acc = 0.0
                for k in range(p):
                    t = Fv[i, k] - Fv[j, k]
                    acc = acc + t * t
                Dv[i, j] = acc
                Dv[j, i] = acc
    return D


def complete_linkage(D, Py_ssize_t k):
    W_arr = np.array(D, dtype=float, copy=True)
    cdef double[:, :] W = W_arr
    cdef Py_ssize_t n = W.shape[0], i, j, a, bi = 0, bj = 0, active = n
    labels_arr = np.arange(n)
    cdef cnp.int64_t[:] labels = labels_arr.astype(np.int64)
    cdef char* alive = <char*> malloc(n)
    cdef double best, v
    merges = []
    try:
        for i in range(n):
            alive[i] = 1
        while active > k:
            best = INFINITY
            bi = -1
            for i in range(n):
                if not alive[i]:
                    continue
                for j in range(i + 1, n):
                    if alive[j] and W[i, j] < best:
                        best = W[i, j]
                        bi = i
                        bj = j
            if bi < 0:
                # only infinite distances left: merge the first two live slots
                for i in range(n):
                    if alive[i]:
                        bi = i
                        break
                for j in range(bi + 1, n):
                    if alive[j]:
                        bj = j
                        break
                best = W[bi, bj]
            merges.append((bi, bj, best))
            for a in range(n):
                if alive[a] and a != bi and a != bj:
                    v = W[bi, a] if W[bi, a] > W[bj, a] else W[bj, a]
                    W[bi, a] = v
                    W[a, bi] = v
            alive[bj] = 0
            for a in range(n):
                if labels[a] == bj:
                    labels[a] = bi
            active -= 1
    finally:
        free(alive)
    return np.asarray(labels).astype(np.intp), merges
