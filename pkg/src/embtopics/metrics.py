"""Classification metrics, distance utilities, and the stratified split.

Macro F1 averages per-class F1 over the full corpus label set (classes a
model never predicts contribute 0), so models that miss classes are
penalized rather than excused. All 0/0 cases in precision/recall/F1
resolve to 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DataError
from .rng import derive_rng


def confusion_matrix(y_true, y_pred, labels) -> np.ndarray:
    """Count matrix, true classes on rows, predicted on columns."""
    y_true, y_pred = list(y_true), list(y_pred)
    if len(y_true) != len(y_pred):
        raise DataError(f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted")
    labels = list(labels)
    index = {c: i for i, c in enumerate(labels)}
    cm = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        if t not in index:
            raise DataError(f"true label {t!r} not in label set")
        if p not in index:
            raise DataError(f"predicted label {p!r} not in label set")
        cm[index[t], index[p]] += 1
    return cm


def per_class_scores(cm: np.ndarray):
    """(precision, recall, f1, support) arrays; any 0/0 yields 0."""
    tp = np.diag(cm).astype(np.float64)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = np.where(tp + fp > 0, tp / (tp + fp), 0.0)
        recall = np.where(tp + fn > 0, tp / (tp + fn), 0.0)
        pr = precision + recall
        f1 = np.where(pr > 0, 2.0 * precision * recall / np.where(pr > 0, pr, 1.0), 0.0)
    return precision, recall, f1, cm.sum(axis=1)


def macro_f1(y_true, y_pred, labels) -> float:
    cm = confusion_matrix(y_true, y_pred, labels)
    _, _, f1, _ = per_class_scores(cm)
    return float(f1.mean())


def accuracy(y_true, y_pred) -> float:
    y_true, y_pred = list(y_true), list(y_pred)
    if len(y_true) != len(y_pred):
        raise DataError(f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted")
    if not y_true:
        raise DataError("empty label sequences")
    return sum(t == p for t, p in zip(y_true, y_pred)) / len(y_true)


def cosine_similarity(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise DataError(f"vectors must share one dimension, got {u.shape} and {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise DataError("cosine similarity undefined for zero vectors")
    return float(np.clip(u @ v / (nu * nv), -1.0, 1.0))


def angular_distance(u, v) -> float:
    """arccos of cosine similarity, in [0, pi]; obeys the triangle inequality."""
    return float(math.acos(cosine_similarity(u, v)))


class SplitResult(NamedTuple):
    train: np.ndarray  # int64 indices, ascending
    test: np.ndarray
    singleton_labels: list  # classes with one member, forced into train


def stratified_split(labels, test_fraction: float, seed: int) -> SplitResult:
    """Per-class seeded test selection; exact, deterministic partition.

    Each class sends round(test_fraction * count) rows to test, at least 1
    and at most count - 1 when the class has >= 2 members. Singleton
    classes go to train and are reported.
    """
    if not 0.0 < test_fraction < 1.0:
        raise DataError(f"test_fraction must be in (0, 1), got {test_fraction}")
    labels = list(labels)
    by_label: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_label.setdefault(label, []).append(i)
    test_idx: list[int] = []
    singletons = []
    for label in sorted(by_label):
        positions = by_label[label]
        count = len(positions)
        if count == 1:
            singletons.append(label)
            continue
        n_test = int(math.floor(test_fraction * count + 0.5))
        n_test = min(max(n_test, 1), count - 1)
        rng = derive_rng(seed, "split", label)
        picks = rng.choice(count, size=n_test, replace=False)
        test_idx.extend(positions[i] for i in picks)
    test = np.asarray(sorted(test_idx), dtype=np.int64)
    train = np.setdiff1d(np.arange(len(labels), dtype=np.int64), test)
    return SplitResult(train=train, test=test, singleton_labels=singletons)


@dataclass
class EvalReport:
    f1_macro: float
    accuracy: float
    labels: list  # row/column order of the confusion matrix
    per_class: dict  # class -> {precision, recall, f1, support}
    confusion: np.ndarray
    meta: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "f1_macro": self.f1_macro,
                "accuracy": self.accuracy,
                "labels": self.labels,
                "per_class": self.per_class,
                "confusion": np.asarray(self.confusion).tolist(),
                "meta": self.meta,
            },
            indent=2,
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        obj = json.loads(text)
        return cls(
            f1_macro=obj["f1_macro"],
            accuracy=obj["accuracy"],
            labels=obj["labels"],
            per_class=obj["per_class"],
            confusion=np.asarray(obj["confusion"], dtype=np.int64),
            meta=obj["meta"],
        )

    def confusion_csv(self) -> str:
        lines = ["true\\pred," + ",".join(str(c) for c in self.labels)]
        cm = np.asarray(self.confusion)
        for i, label in enumerate(self.labels):
            lines.append(f"{label}," + ",".join(str(int(v)) for v in cm[i]))
        return "\n".join(lines) + "\n"


def evaluate_predictions(y_true, y_pred, labels, meta=None) -> EvalReport:
    labels = list(labels)
    cm = confusion_matrix(y_true, y_pred, labels)
    precision, recall, f1, support = per_class_scores(cm)
    per_class = {
        c: {
            "precision": float(precision[i]),
            "recall": float(recall[i]),
            "f1": float(f1[i]),
            "support": int(support[i]),
        }
        for i, c in enumerate(labels)
    }
    total = cm.sum()
    return EvalReport(
        f1_macro=float(f1.mean()),
        accuracy=float(np.trace(cm) / total) if total else 0.0,
        labels=labels,
        per_class=per_class,
        confusion=cm,
        meta=dict(meta or {}),
    )
