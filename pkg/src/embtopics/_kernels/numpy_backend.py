"""Pure-numpy kernels, the fallback when the compiled extension is absent.

Same signatures and semantics as _core; assignment ties go to the lowest
cluster index (np.argmin returns the first minimum).
"""

import numpy as np

# rows per chunk for the blocked dense/CSR products
_ROW_CHUNK = 8192


def dense_assign(X, C):
    """Nearest centroid per row by squared Euclidean distance.

    Returns (assignments int64[n], mindist float64[n]).
    """
    n, k = X.shape[0], C.shape[0]
    xsq = np.einsum("ij,ij->i", X, X)
    csq = np.einsum("ij,ij->i", C, C)
    assign = np.empty(n, dtype=np.int64)
    mind = np.empty(n, dtype=np.float64)
    step = max(1, (1 << 21) // max(k, 1))
    for s in range(0, n, step):
        e = min(n, s + step)
        d2 = xsq[s:e, None] + csq[None, :] - 2.0 * (X[s:e] @ C.T)
        np.maximum(d2, 0.0, out=d2)
        a = np.argmin(d2, axis=1)
        assign[s:e] = a
        mind[s:e] = d2[np.arange(e - s), a]
    return assign, mind


def dense_update(X, assign, k):
    """Per-cluster sums and member counts (stable summation order)."""
    counts = np.bincount(assign, minlength=k)
    sums = np.zeros((k, X.shape[1]), dtype=np.float64)
    order = np.argsort(assign, kind="stable")
    starts = np.searchsorted(assign[order], np.arange(k))
    present = counts > 0
    if present.any():
        sums[present] = np.add.reduceat(X[order], starts[present], axis=0)
    return sums, counts


def csr_matmul(indptr, indices, data, B):
    """CSR @ dense:  (n x d) @ (d x m) -> (n x m)."""
    n = indptr.size - 1
    out = np.zeros((n, B.shape[1]), dtype=np.float64)
    for s in range(0, n, _ROW_CHUNK):
        e = min(n, s + _ROW_CHUNK)
        lo, hi = indptr[s], indptr[e]
        if hi == lo:
            continue
        prod = data[lo:hi, None] * B[indices[lo:hi]]
        starts = indptr[s:e] - lo
        nonempty = np.diff(indptr[s : e + 1]) > 0
        out[s:e][nonempty] = np.add.reduceat(prod, starts[nonempty], axis=0)
    return out


def csr_tmatmul(indptr, indices, data, B, d):
    """CSR.T @ dense:  (d x n) @ (n x m) -> (d x m)."""
    n = indptr.size - 1
    out = np.zeros((d, B.shape[1]), dtype=np.float64)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    for s in range(0, data.size, 1 << 20):
        e = min(data.size, s + (1 << 20))
        np.add.at(out, indices[s:e], data[s:e, None] * B[rows[s:e]])
    return out


def csr_assign(indptr, indices, data, xsq, C):
    """Nearest centroid per CSR row via ||x||^2 + ||c||^2 - 2 x.c."""
    n = indptr.size - 1
    csq = np.einsum("ij,ij->i", C, C)
    xc = csr_matmul(indptr, indices, data, np.ascontiguousarray(C.T))
    d2 = xsq[:, None] + csq[None, :] - 2.0 * xc
    np.maximum(d2, 0.0, out=d2)
    assign = np.argmin(d2, axis=1).astype(np.int64)
    mind = d2[np.arange(n), assign]
    return assign, mind


def csr_update(indptr, indices, data, assign, k, d):
    """Per-cluster sums and counts for CSR rows."""
    counts = np.bincount(assign, minlength=k)
    sums = np.zeros((k, d), dtype=np.float64)
    rows = np.repeat(assign, np.diff(indptr))
    for s in range(0, data.size, 1 << 20):
        e = min(data.size, s + (1 << 20))
        np.add.at(sums, (rows[s:e], indices[s:e]), data[s:e])
    return sums, counts
