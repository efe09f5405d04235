"""Shared model plumbing: errors, the trained-model container, labels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class TrainingError(Exception):
    pass


class SingleClassTraining(TrainingError):
    pass


class DimensionMismatch(TrainingError):
    pass


class KTooLarge(TrainingError):
    pass


class NonFiniteLoss(TrainingError):
    pass


class UnsupportedFamily(TrainingError):
    pass


@dataclass(frozen=True)
class TrainedModel:
    """A fitted classifier: config + class list + family-specific state.

    Prediction is a pure function of (state, input); the class list is
    sorted, and every argmax/vote tie resolves to the earliest class in
    it, so retraining on permuted rows cannot reshuffle tie outcomes.
    """

    config: object
    classes: tuple[str, ...]
    seed: int
    state: object


def encode_labels(y) -> tuple[tuple[str, ...], np.ndarray]:
    """Map labels to indices over the sorted class set."""
    labels = [str(v) for v in y]
    classes = tuple(sorted(set(labels)))
    index = {c: i for i, c in enumerate(classes)}
    return classes, np.array([index[v] for v in labels], dtype=np.intp)


def as_matrix(X) -> np.ndarray:
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch(f"X must be 2-dimensional, got shape {arr.shape}")
    return arr


def check_training_inputs(X: np.ndarray, y) -> tuple[tuple[str, ...], np.ndarray]:
    if X.shape[0] != len(y):
        raise DimensionMismatch(f"{X.shape[0]} rows but {len(y)} labels")
    classes, y_idx = encode_labels(y)
    if len(classes) < 2:
        raise SingleClassTraining(f"training labels contain {len(classes)} class(es), need >= 2")
    return classes, y_idx
