"""k-nearest-neighbors: a lazy learner that memorizes the training set.

All tie handling is pinned down so results are reproducible: equal
distances at the k-th neighbor resolve to the lower training-row index
(stable sort) and vote ties resolve to the class that sorts earliest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import KTooLarge
from .configs import KnnConfig


@dataclass(frozen=True)
class KnnState:
    points: np.ndarray  # (n, d)
    label_idx: np.ndarray  # (n,) indices into the model's class list


def fit_knn(config: KnnConfig, X: np.ndarray, y_idx: np.ndarray) -> KnnState:
    if config.k > X.shape[0]:
        raise KTooLarge(f"k={config.k} exceeds the {X.shape[0]} training rows")
    return KnnState(points=X.copy(), label_idx=y_idx.copy())


def distances(config: KnnConfig, points: np.ndarray, query: np.ndarray) -> np.ndarray:
    diff = points - query
    if config.metric == "manhattan":
        return np.abs(diff).sum(axis=1)
    if config.metric == "euclidean":
        return np.sqrt((diff * diff).sum(axis=1))
    return (np.abs(diff) ** config.p).sum(axis=1) ** (1.0 / config.p)


def predict_knn(config: KnnConfig, state: KnnState, X: np.ndarray, n_classes: int) -> np.ndarray:
    out = np.empty(X.shape[0], dtype=np.intp)
    for i, query in enumerate(X):
        dist = distances(config, state.points, query)
        nearest = np.argsort(dist, kind="stable")[: config.k]
        votes = np.bincount(state.label_idx[nearest], minlength=n_classes)
        out[i] = int(np.argmax(votes))  # first maximum = earliest class
    return out
