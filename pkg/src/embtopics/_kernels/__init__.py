"""Kernel backend selection.

The compiled extension (_core, built from _core.pyx) is preferred when
present; otherwise the numpy fallback is used. Override with the
environment variable EMBTOPICS_KERNELS=c|py, or set_backend() at runtime
(tests and the benchmark use the latter to compare both).

All entry points canonicalize dtypes/contiguity here so both backends see
identical inputs: float64 C-contiguous matrices, int64 index arrays.
"""

import os
import warnings

import numpy as np

from . import numpy_backend

_BACKENDS = {"py": numpy_backend}
try:
    from . import _core

    _BACKENDS["c"] = _core
except ImportError:
    _core = None

_requested = os.environ.get("EMBTOPICS_KERNELS", "").strip().lower()
if _requested and _requested not in _BACKENDS:
    warnings.warn(
        f"EMBTOPICS_KERNELS={_requested!r} not available "
        f"(choices: {sorted(_BACKENDS)}); using default",
        RuntimeWarning,
    )
    _requested = ""
_active = _BACKENDS[_requested] if _requested else _BACKENDS.get("c", numpy_backend)


def active_backend() -> str:
    return "c" if _active is _BACKENDS.get("c") else "py"


def available_backends() -> tuple:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; available: {sorted(_BACKENDS)}")
    _active = _BACKENDS[name]


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


# Above this per-row workload (d*k), BLAS beats the fused compiled loop by
# a wide margin (measured ~5-8x at d*k >= 4096), so the gemm-based
# implementation is used regardless of backend.
_DENSE_ASSIGN_BLAS_MIN = 512


def dense_assign(X, C):
    X, C = _f64(X), _f64(C)
    if _active is not numpy_backend and C.shape[0] * C.shape[1] >= _DENSE_ASSIGN_BLAS_MIN:
        return numpy_backend.dense_assign(X, C)
    return _active.dense_assign(X, C)


def dense_update(X, assign, k):
    return _active.dense_update(_f64(X), _i64(assign), int(k))


def csr_assign(indptr, indices, data, xsq, C):
    return _active.csr_assign(_i64(indptr), _i64(indices), _f64(data), _f64(xsq), _f64(C))


def csr_update(indptr, indices, data, assign, k, d):
    return _active.csr_update(_i64(indptr), _i64(indices), _f64(data), _i64(assign), int(k), int(d))


def csr_matmul(indptr, indices, data, B):
    return _active.csr_matmul(_i64(indptr), _i64(indices), _f64(data), _f64(B))


def csr_tmatmul(indptr, indices, data, B, d):
    return _active.csr_tmatmul(_i64(indptr), _i64(indices), _f64(data), _f64(B), int(d))
