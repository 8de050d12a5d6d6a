"""k-means over dense or compressed-row matrices.

k-means++ initialization, Lloyd iterations, multiple restarts with
independent seeded RNG streams; the restart with minimal inertia wins.
Distances are squared Euclidean on the rows as given (callers decide
whether to L2-normalize first). Assignment ties go to the lowest cluster
index. Empty clusters are repaired by moving their centroid onto the row
currently farthest from its assigned centroid, so every returned cluster
is non-empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import DataError
from .rng import derive_rng
from .tfidf import SparseMatrix


@dataclass
class KMeansConfig:
    k: int
    max_iter: int = 300
    tol: float = 1e-4  # Frobenius norm of centroid movement
    n_init: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")
        if self.n_init < 1:
            raise ValueError(f"n_init must be >= 1, got {self.n_init}")


@dataclass
class KMeansResult:
    centroids: np.ndarray  # k x d float64
    assignments: np.ndarray  # int64, values in 0..k-1, every cluster non-empty
    inertia: float  # sum of squared distances to assigned centroids
    iterations_run: int
    # per-restart inertia sequences (one value per Lloyd iteration plus the
    # final consistency pass); diagnostics for the monotonicity property
    restart_inertia_traces: list = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]


def _as_rows(X):
    """Normalize input to ("dense", float64 array) or ("csr", SparseMatrix)."""
    if isinstance(X, SparseMatrix):
        if X.data.size and not np.isfinite(X.data).all():
            raise DataError("non-finite value in sparse input")
        return "csr", X
    arr = np.ascontiguousarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise DataError(f"row matrix must be 2-D, got ndim={arr.ndim}")
    if not np.isfinite(arr).all():
        raise DataError("non-finite value in dense input")
    return "dense", arr


def _shape(kind, X):
    return X.shape if kind == "dense" else (X.n_rows, X.n_cols)


def _row_sqnorms(kind, X):
    if kind == "dense":
        return np.einsum("ij,ij->i", X, X)
    return X.row_sqnorms()


def _row_as_dense(kind, X, i, d):
    if kind == "dense":
        return X[i].copy()
    out = np.zeros(d, dtype=np.float64)
    s, e = X.indptr[i], X.indptr[i + 1]
    out[X.indices[s:e]] = X.data[s:e]
    return out


def _sqdist_to_vector(kind, X, xsq, c):
    """Squared distance of every row to a single dense vector."""
    if kind == "dense":
        prod = X @ c
    else:
        prod = K.csr_matmul(X.indptr, X.indices, X.data, c[:, None])[:, 0]
    d2 = xsq + (c @ c) - 2.0 * prod
    np.maximum(d2, 0.0, out=d2)
    return d2


def _assign(kind, X, xsq, C):
    if kind == "dense":
        return K.dense_assign(X, C)
    return K.csr_assign(X.indptr, X.indices, X.data, xsq, C)


def _update(kind, X, assign, k, d):
    if kind == "dense":
        return K.dense_update(X, assign, k)
    return K.csr_update(X.indptr, X.indices, X.data, assign, k, d)


def kmeanspp_init(X, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: D^2-weighted sampling of k rows as centroids.

    Falls back to uniform choice among unchosen rows when all candidate
    weights are zero (duplicate points).
    """
    kind, X = _as_rows(X)
    n, d = _shape(kind, X)
    if n < k:
        raise DataError(f"cannot pick {k} centroids from {n} rows")
    xsq = _row_sqnorms(kind, X)
    centroids = np.empty((k, d), dtype=np.float64)
    chosen = []
    first = int(rng.integers(n))
    centroids[0] = _row_as_dense(kind, X, first, d)
    chosen.append(first)
    if k == 1:
        return centroids
    mind = _sqdist_to_vector(kind, X, xsq, centroids[0])
    for j in range(1, k):
        total = float(mind.sum())
        if not np.isfinite(total) or total <= 0.0:
            pool = np.setdiff1d(np.arange(n), np.asarray(chosen))
            idx = int(pool[rng.integers(pool.size)])
        else:
            r = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(mind), r, side="right"))
            idx = min(idx, n - 1)
        centroids[j] = _row_as_dense(kind, X, idx, d)
        chosen.append(idx)
        np.minimum(mind, _sqdist_to_vector(kind, X, xsq, centroids[j]), out=mind)
    return centroids


def _repair_empty(kind, X, assign, mind, C, k, d):
    """Force rows into empty clusters (lowest cluster index first).

    The donor row is the one farthest from its assigned centroid whose
    cluster keeps at least one member; its centroid becomes an exact copy
    of the row, so the recorded inertia can only decrease.
    """
    counts = np.bincount(assign, minlength=k)
    empties = np.flatnonzero(counts == 0)
    if empties.size == 0:
        return
    by_dist = np.argsort(-mind, kind="stable")
    cursor = 0
    for j in empties:
        while cursor < by_dist.size and counts[assign[by_dist[cursor]]] <= 1:
            cursor += 1
        if cursor >= by_dist.size:  # unreachable when n >= k
            raise DataError("cannot repair empty cluster: no donor row")
        r = int(by_dist[cursor])
        cursor += 1
        counts[assign[r]] -= 1
        counts[j] = 1
        assign[r] = j
        C[j] = _row_as_dense(kind, X, r, d)
        mind[r] = 0.0


def kmeans_fit(X, config: KMeansConfig) -> KMeansResult:
    """Lloyd's algorithm with n_init restarts; deterministic given (X, config)."""
    kind, X = _as_rows(X)
    n, d = _shape(kind, X)
    k = config.k
    if n < k:
        raise DataError(f"need at least k={k} rows, got {n}")
    xsq = _row_sqnorms(kind, X)

    best = None
    traces = []
    for restart in range(config.n_init):
        rng = derive_rng(config.seed, "kmeans-restart", restart)
        C = kmeanspp_init(X, k, rng)
        trace = []
        iterations = 0
        for _ in range(config.max_iter):
            iterations += 1
            assign, mind = _assign(kind, X, xsq, C)
            _repair_empty(kind, X, assign, mind, C, k, d)
            trace.append(float(mind.sum()))
            sums, counts = _update(kind, X, assign, k, d)
            new_C = sums / counts[:, None]
            shift = float(np.linalg.norm(new_C - C))
            C = new_C
            if shift <= config.tol:
                break
        # final pass so assignments/inertia are consistent with returned centroids
        assign, mind = _assign(kind, X, xsq, C)
        _repair_empty(kind, X, assign, mind, C, k, d)
        inertia = float(mind.sum())
        trace.append(inertia)
        traces.append(trace)
        if best is None or inertia < best.inertia:
            best = KMeansResult(
                centroids=C,
                assignments=assign,
                inertia=inertia,
                iterations_run=iterations,
            )
    best.restart_inertia_traces = traces
    return best


def assign_to_centroids(X, centroids: np.ndarray):
    """Nearest-centroid assignment for new rows (same metric/tie rule as fit).

    Returns (assignments, squared distances).
    """
    kind, X = _as_rows(X)
    n, d = _shape(kind, X)
    C = np.ascontiguousarray(centroids, dtype=np.float64)
    if C.ndim != 2 or C.shape[1] != d:
        raise DataError(f"dimension mismatch: rows have d={d}, centroids {C.shape}")
    xsq = _row_sqnorms(kind, X)
    return _assign(kind, X, xsq, C)
