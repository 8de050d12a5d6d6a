"""Unsupervised cluster classifier.

Fit k-means with as many clusters as there are classes, label each cluster
with the most frequent class among its members, and predict by mapping a
row's nearest centroid to that cluster's class. Several clusters may share
a class and some classes may be missed entirely; missed classes simply
score zero downstream.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .kmeans import KMeansConfig, KMeansResult, assign_to_centroids, kmeans_fit
from .tfidf import SparseMatrix


class ClusterError(DataError):
    pass


@dataclass
class ClusterModel:
    kmeans: KMeansResult
    class_map: dict[int, str]  # cluster index -> class name, total on 0..k-1
    normalize: bool  # whether rows were L2-normalized at fit time


def normalize_rows(X):
    """L2-normalize rows; zero rows are left untouched."""
    if isinstance(X, SparseMatrix):
        return X.l2_normalized()
    arr = np.ascontiguousarray(X, dtype=np.float64)
    norms = np.linalg.norm(arr, axis=1, keepdims=True)
    return np.divide(arr, norms, out=arr.copy(), where=norms > 0)


def majority_map(assignments, labels, k: int | None = None) -> dict[int, str]:
    """Modal class per cluster; ties go to the lexicographically smallest name."""
    assignments = np.asarray(assignments, dtype=np.int64)
    labels = list(labels)
    if assignments.size != len(labels):
        raise ClusterError(
            f"assignments ({assignments.size}) and labels ({len(labels)}) differ in length"
        )
    if k is None:
        k = int(assignments.max()) + 1 if assignments.size else 0
    counts = np.bincount(assignments, minlength=k)
    if np.any(counts == 0):
        raise ClusterError(f"empty cluster(s): {np.flatnonzero(counts == 0).tolist()}")
    per_cluster: dict[int, Counter] = {j: Counter() for j in range(k)}
    for cluster, label in zip(assignments, labels):
        per_cluster[int(cluster)][label] += 1
    return {
        j: min(counter.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        for j, counter in per_cluster.items()
    }


def fit_cluster_classifier(X, labels, config: KMeansConfig, normalize: bool = False) -> ClusterModel:
    if normalize:
        X = normalize_rows(X)
    result = kmeans_fit(X, config)
    class_map = majority_map(result.assignments, labels, k=config.k)
    return ClusterModel(kmeans=result, class_map=class_map, normalize=normalize)


def cluster_predict(model: ClusterModel, X) -> list[str]:
    if model.normalize:
        X = normalize_rows(X)
    assign, _ = assign_to_centroids(X, model.kmeans.centroids)
    return [model.class_map[int(j)] for j in assign]
