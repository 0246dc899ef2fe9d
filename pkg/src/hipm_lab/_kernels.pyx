# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: sorted 1-D Wasserstein-1 and the dense assignment solver."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()


cdef double _w1_sorted(const double[:] x1, const double[:] w1,
                       const double[:] x2, const double[:] w2) noexcept nogil:
    # integrate |F1 - F2| over the merged atom sequence
    cdef Py_ssize_t i = 0, j = 0
    cdef Py_ssize_t k1 = x1.shape[0], k2 = x2.shape[0]
    cdef double f1 = 0.0, f2 = 0.0, total = 0.0, pos, nxt
    if k1 == 0 or k2 == 0:
        return 0.0
    pos = x1[0] if x1[0] < x2[0] else x2[0]
    while i < k1 or j < k2:
        if j >= k2 or (i < k1 and x1[i] <= x2[j]):
            nxt = x1[i]
        else:
            nxt = x2[j]
        total += fabs(f1 - f2) * (nxt - pos)
        pos = nxt
        while i < k1 and x1[i] == pos:
            f1 += w1[i]
            i += 1
        while j < k2 and x2[j] == pos:
            f2 += w2[j]
            j += 1
    return total


def w1_sorted(x1, w1, x2, w2):
    cdef const double[:] a1 = np.ascontiguousarray(x1, dtype=np.float64)
    cdef const double[:] b1 = np.ascontiguousarray(w1, dtype=np.float64)
    cdef const double[:] a2 = np.ascontiguousarray(x2, dtype=np.float64)
    cdef const double[:] b2 = np.ascontiguousarray(w2, dtype=np.float64)
    cdef double out
    with nogil:
        out = _w1_sorted(a1, b1, a2, b2)
    return out


def pairwise_w1(X1, W1, X2, W2):
    """All pairwise W1 values between rows of two packed, sorted laws."""
    cdef const double[:, :] a1 = np.ascontiguousarray(X1, dtype=np.float64)
    cdef const double[:, :] b1 = np.ascontiguousarray(W1, dtype=np.float64)
    cdef const double[:, :] a2 = np.ascontiguousarray(X2, dtype=np.float64)
    cdef const double[:, :] b2 = np.ascontiguousarray(W2, dtype=np.float64)
    cdef Py_ssize_t n1 = a1.shape[0], n2 = a2.shape[0], r, c
    out = np.empty((n1, n2), dtype=np.float64)
    cdef double[:, :] o = out
    with nogil:
        for r in range(n1):
            for c in range(n2):
                o[r, c] = _w1_sorted(a1[r], b1[r], a2[c], b2[c])
    return out


def assignment(cost):
    """Minimum-cost perfect matching on a square matrix.

    Shortest augmenting paths with row/column potentials, O(n^3).
    Returns ``perm`` with row ``i`` matched to column ``perm[i]``.
    """
    cdef const double[:, :] C = np.ascontiguousarray(cost, dtype=np.float64)
    cdef Py_ssize_t n = C.shape[0]
    u_arr = np.zeros(n + 1)
    v_arr = np.zeros(n + 1)
    minv_arr = np.empty(n + 1)
    p_arr = np.zeros(n + 1, dtype=np.intp)
    way_arr = np.zeros(n + 1, dtype=np.intp)
    used_arr = np.zeros(n + 1, dtype=np.uint8)
    cdef double[:] u = u_arr, v = v_arr, minv = minv_arr
    cdef Py_ssize_t[:] p = p_arr, way = way_arr
    cdef unsigned char[:] used = used_arr
    cdef Py_ssize_t i, j, j0, j1, i0
    cdef double delta, cur
    with nogil:
        for i in range(1, n + 1):
            p[0] = i
            j0 = 0
            for j in range(n + 1):
                minv[j] = INFINITY
                used[j] = 0
            while True:
                used[j0] = 1
                i0 = p[j0]
                delta = INFINITY
                j1 = 0
                for j in range(1, n + 1):
                    if not used[j]:
                        cur = C[i0 - 1, j - 1] - u[i0] - v[j]
                        if cur < minv[j]:
                            minv[j] = cur
                            way[j] = j0
                        if minv[j] < delta:
                            delta = minv[j]
                            j1 = j
                for j in range(n + 1):
                    if used[j]:
                        u[p[j]] += delta
                        v[j] -= delta
                    else:
                        minv[j] -= delta
                j0 = j1
                if p[j0] == 0:
                    break
            while True:
                j1 = way[j0]
                p[j0] = p[j1]
                j0 = j1
                if j0 == 0:
                    break
    perm = np.empty(n, dtype=np.int64)
    for j in range(1, n + 1):
        perm[p_arr[j] - 1] = j - 1
    return perm
