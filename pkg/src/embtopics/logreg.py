"""Multinomial logistic regression on embedding rows.

Full-batch gradient descent with halving backtracking line search from zero
initialization: deterministic, solver-free, and (with l2 > 0) strictly
convex, so the optimizer reaches the unique optimum regardless of row
order. The objective is mean cross-entropy plus (l2/2)*||W||_F^2 with the
bias unpenalized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import DataError
from .tfidf import SparseMatrix

_MAX_HALVINGS = 60


class LogRegError(DataError):
    pass


@dataclass
class LogRegConfig:
    l2: float = 1e-4
    max_epochs: int = 1000
    grad_tol: float = 1e-5
    learning_rate: float = 0.5
    seed: int = 0  # interface symmetry; zero init needs no randomness

    def __post_init__(self):
        if self.l2 < 0:
            raise ValueError(f"l2 must be >= 0, got {self.l2}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")


@dataclass
class LogRegModel:
    weights: np.ndarray  # C x d
    bias: np.ndarray  # C
    classes: list[str]  # sorted, fixes row order
    # objective value after each accepted step; diagnostics for the
    # monotonicity property
    loss_trace: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "classes": self.classes,
                "weights": self.weights.tolist(),
                "bias": self.bias.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "LogRegModel":
        obj = json.loads(text)
        return cls(
            weights=np.asarray(obj["weights"], dtype=np.float64),
            bias=np.asarray(obj["bias"], dtype=np.float64),
            classes=list(obj["classes"]),
        )


def _matmul(X, B):
    """X @ B for dense or CSR rows; B is d x m dense."""
    if isinstance(X, SparseMatrix):
        return K.csr_matmul(X.indptr, X.indices, X.data, B)
    return X @ B


def _tmatmul(X, R):
    """X.T @ R for dense or CSR rows; R is n x m dense."""
    if isinstance(X, SparseMatrix):
        return K.csr_tmatmul(X.indptr, X.indices, X.data, R, X.n_cols)
    return X.T @ R


def _logits(X, W, b):
    return _matmul(X, np.ascontiguousarray(W.T)) + b[None, :]


def loss_and_grad(W, b, X, y_idx, l2):
    """Objective, gradients, and class probabilities at (W, b).

    J = mean cross-entropy + (l2/2)*||W||_F^2; bias unpenalized.
    """
    n = y_idx.size
    logits = _logits(X, W, b)
    m = logits.max(axis=1, keepdims=True)
    lse = m[:, 0] + np.log(np.exp(logits - m).sum(axis=1))
    loss = float(-(logits[np.arange(n), y_idx] - lse).mean() + 0.5 * l2 * (W**2).sum())
    P = np.exp(logits - lse[:, None])
    R = P.copy()
    R[np.arange(n), y_idx] -= 1.0
    grad_W = _tmatmul(X, R).T / n + l2 * W
    grad_b = R.sum(axis=0) / n
    return loss, grad_W, grad_b, P


def _prep(X, y):
    if isinstance(X, SparseMatrix):
        n, d = X.n_rows, X.n_cols
        if X.data.size and not np.isfinite(X.data).all():
            raise DataError("non-finite value in sparse input")
    else:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise DataError(f"row matrix must be 2-D, got ndim={X.ndim}")
        if not np.isfinite(X).all():
            raise DataError("non-finite value in dense input")
        n, d = X.shape
    y = list(y)
    if len(y) != n:
        raise DataError(f"labels ({len(y)}) and rows ({n}) differ in length")
    return X, y, n, d


def train_logreg(X, y, config: LogRegConfig | None = None) -> LogRegModel:
    config = config or LogRegConfig()
    X, y, n, d = _prep(X, y)
    classes = sorted(set(y))
    if len(classes) < 2:
        raise LogRegError(f"need at least 2 distinct classes, got {len(classes)}")
    class_index = {c: i for i, c in enumerate(classes)}
    y_idx = np.asarray([class_index[label] for label in y], dtype=np.int64)
    C = len(classes)

    W = np.zeros((C, d), dtype=np.float64)
    b = np.zeros(C, dtype=np.float64)
    loss, gW, gb, _ = loss_and_grad(W, b, X, y_idx, config.l2)
    trace = [loss]
    for epoch in range(1, config.max_epochs + 1):
        if not np.isfinite(loss):
            raise LogRegError(f"non-finite loss at epoch {epoch}")
        gnorm = float(np.sqrt((gW**2).sum() + (gb**2).sum()))
        if gnorm <= config.grad_tol:
            break
        step = config.learning_rate
        accepted = False
        for _ in range(_MAX_HALVINGS):
            W_new = W - step * gW
            b_new = b - step * gb
            loss_new, gW_new, gb_new, _ = loss_and_grad(W_new, b_new, X, y_idx, config.l2)
            if np.isfinite(loss_new) and loss_new < loss:
                W, b, loss, gW, gb = W_new, b_new, loss_new, gW_new, gb_new
                trace.append(loss)
                accepted = True
                break
            step *= 0.5
        if not accepted:  # no descent direction usable at float precision
            break
    return LogRegModel(weights=W, bias=b, classes=classes, loss_trace=trace)


def predict_logreg(model: LogRegModel, X):
    """Class per row (argmax; ties to lexicographically smallest) and softmax probabilities."""
    if isinstance(X, SparseMatrix):
        d = X.n_cols
    else:
        X = np.ascontiguousarray(X, dtype=np.float64)
        d = X.shape[1]
    if d != model.weights.shape[1]:
        raise LogRegError(f"dimension mismatch: rows have d={d}, model expects {model.weights.shape[1]}")
    logits = _logits(X, model.weights, model.bias)
    logits -= logits.max(axis=1, keepdims=True)
    P = np.exp(logits)
    P /= P.sum(axis=1, keepdims=True)
    pred_idx = np.argmax(P, axis=1)
    return [model.classes[i] for i in pred_idx], P
