# Compiled kernels for the clustering / regression hot loops.
# Semantics mirror numpy_backend exactly; ties in assignment go to the
# lowest cluster index (strict < comparison).

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


def dense_assign(double[:, ::1] X, double[:, ::1] C):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = C.shape[0]
    assign_arr = np.empty(n, dtype=np.int64)
    mind_arr = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] assign = assign_arr
    cdef double[::1] mind = mind_arr
    cdef Py_ssize_t i, j, t, bj
    cdef double s, diff, best
    for i in range(n):
        best = INFINITY
        bj = 0
        for j in range(k):
            s = 0.0
            for t in range(d):
                diff = X[i, t] - C[j, t]
                s += diff * diff
            if s < best:
                best = s
                bj = j
        assign[i] = bj
        mind[i] = best
    return assign_arr, mind_arr


def dense_update(double[:, ::1] X, cnp.int64_t[::1] assign, Py_ssize_t k):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    sums_arr = np.zeros((k, d), dtype=np.float64)
    counts_arr = np.zeros(k, dtype=np.int64)
    cdef double[:, ::1] sums = sums_arr
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef Py_ssize_t i, t, j
    for i in range(n):
        j = assign[i]
        counts[j] += 1
        for t in range(d):
            sums[j, t] += X[i, t]
    return sums_arr, counts_arr


def csr_matmul(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
               double[::1] data, double[:, ::1] B):
    cdef Py_ssize_t n = indptr.shape[0] - 1, m = B.shape[1]
    out_arr = np.zeros((n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, p, t, c
    cdef double v
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            c = indices[p]
            v = data[p]
            for t in range(m):
                out[i, t] += v * B[c, t]
    return out_arr


def csr_tmatmul(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
                double[::1] data, double[:, ::1] B, Py_ssize_t d):
    cdef Py_ssize_t n = indptr.shape[0] - 1, m = B.shape[1]
    out_arr = np.zeros((d, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, p, t, c
    cdef double v
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            c = indices[p]
            v = data[p]
            for t in range(m):
                out[c, t] += v * B[i, t]
    return out_arr


def csr_assign(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
               double[::1] data, double[::1] xsq, double[:, ::1] C):
    cdef Py_ssize_t n = indptr.shape[0] - 1, k = C.shape[0], d = C.shape[1]
    assign_arr = np.empty(n, dtype=np.int64)
    mind_arr = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] assign = assign_arr
    cdef double[::1] mind = mind_arr
    csq_arr = np.einsum("ij,ij->i", np.asarray(C), np.asarray(C))
    cdef double[::1] csq = csq_arr
    cdef Py_ssize_t i, j, p, bj
    cdef double dot, dist, best
    for i in range(n):
        best = INFINITY
        bj = 0
        for j in range(k):
            dot = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                dot += data[p] * C[j, indices[p]]
            dist = xsq[i] + csq[j] - 2.0 * dot
            if dist < 0.0:
                dist = 0.0
            if dist < best:
                best = dist
                bj = j
        assign[i] = bj
        mind[i] = best
    return assign_arr, mind_arr


def csr_update(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
               double[::1] data, cnp.int64_t[::1] assign,
               Py_ssize_t k, Py_ssize_t d):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    sums_arr = np.zeros((k, d), dtype=np.float64)
    counts_arr = np.zeros(k, dtype=np.int64)
    cdef double[:, ::1] sums = sums_arr
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef Py_ssize_t i, p, j
    for i in range(n):
        j = assign[i]
        counts[j] += 1
        for p in range(indptr[i], indptr[i + 1]):
            sums[j, indices[p]] += data[p]
    return sums_arr, counts_arr
