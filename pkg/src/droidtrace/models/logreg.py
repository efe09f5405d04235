"""One-vs-rest logistic regression with a deterministic batch optimizer.

Each class gets a binary subproblem: minimize the mean cross-entropy
plus an L2 term ||w||^2 / (2 * c * n) on the weights (bias unpenalized)
by full-batch gradient descent with backtracking line search. The
descent stops once the gradient infinity-norm drops to the configured
tolerance or the iteration budget runs out. No randomness is involved,
so identical inputs give bit-identical weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import NonFiniteLoss
from .configs import LogRegConfig

_ARMIJO = 1e-4


@dataclass(frozen=True)
class LinearState:
    weights: np.ndarray  # (n_classes, d)
    biases: np.ndarray  # (n_classes,)


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def binary_objective(w, b, X, targets, c):
    """Mean cross-entropy over {0,1} targets plus the scaled L2 term."""
    z = X @ w + b
    ce = float(np.mean(np.logaddexp(0.0, z) - targets * z))
    return ce + float(w @ w) / (2.0 * c * len(targets))


def binary_gradient(w, b, X, targets, c):
    n = len(targets)
    residual = sigmoid(X @ w + b) - targets
    grad_w = X.T @ residual / n + w / (c * n)
    grad_b = float(np.mean(residual))
    return grad_w, grad_b


def _fit_binary(X, targets, config: LogRegConfig):
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    step = 1.0
    loss = binary_objective(w, b, X, targets, config.c)
    for _ in range(config.max_iter):
        if not np.isfinite(loss):
            raise NonFiniteLoss("logistic objective diverged")
        grad_w, grad_b = binary_gradient(w, b, X, targets, config.c)
        grad_norm = max(float(np.max(np.abs(grad_w))) if d else 0.0, abs(grad_b))
        if grad_norm <= config.tol:
            break
        grad_sq = float(grad_w @ grad_w) + grad_b * grad_b
        # Backtracking: halve the step until the Armijo condition holds.
        trial = step
        while trial > 1e-20:
            w_new = w - trial * grad_w
            b_new = b - trial * grad_b
            loss_new = binary_objective(w_new, b_new, X, targets, config.c)
            if loss_new <= loss - _ARMIJO * trial * grad_sq:
                break
            trial *= 0.5
        else:
            break  # no productive step exists at this precision
        w, b, loss = w_new, b_new, loss_new
        step = trial * 2.0
    return w, b


def fit_logreg(config: LogRegConfig, X: np.ndarray, y_idx: np.ndarray, n_classes: int) -> LinearState:
    weights = np.zeros((n_classes, X.shape[1]))
    biases = np.zeros(n_classes)
    for cls in range(n_classes):
        targets = (y_idx == cls).astype(float)
        weights[cls], biases[cls] = _fit_binary(X, targets, config)
    return LinearState(weights=weights, biases=biases)


def decision_margins(state: LinearState, X: np.ndarray) -> np.ndarray:
    return X @ state.weights.T + state.biases


def logreg_loss_and_gradient(config: LogRegConfig, params: np.ndarray, X, y_idx, n_classes):
    """Objective/gradient over the flattened one-vs-rest parameters.

    Layout: per class, d weights then the bias. The reported loss is the
    mean of the per-class objectives (the subproblems are independent,
    so this shares its minimizers with training).
    """
    d = X.shape[1]
    loss_total = 0.0
    grad = np.zeros_like(params)
    for cls in range(n_classes):
        block = params[cls * (d + 1) : (cls + 1) * (d + 1)]
        w, b = block[:d], float(block[d])
        targets = (y_idx == cls).astype(float)
        loss_total += binary_objective(w, b, X, targets, config.c)
        grad_w, grad_b = binary_gradient(w, b, X, targets, config.c)
        grad[cls * (d + 1) : cls * (d + 1) + d] = grad_w / n_classes
        grad[cls * (d + 1) + d] = grad_b / n_classes
    return loss_total / n_classes, grad
