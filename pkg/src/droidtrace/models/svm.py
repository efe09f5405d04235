"""Soft-margin SVM trained by sequential minimal optimization.

Multiclass goes one-vs-rest: each class gets a binary dual problem

    max  sum(a) - 1/2 * sum_ij a_i a_j y_i y_j K_ij
    s.t. 0 <= a_i <= C,  sum_i a_i y_i = 0

solved by pairwise coordinate ascent. The pair partner is chosen by the
largest error gap |E_i - E_j| (ties to the lowest index), falling back
to an in-order scan, so the optimization path is fully deterministic.
A sweep over all points with no update counts as a clean pass; training
stops after `max_passes` consecutive clean passes, at which point no
point violates the KKT conditions by more than `tol`.

Kernels: linear <x,z>; poly (gamma*<x,z> + 1)^degree; rbf
exp(-gamma*||x-z||^2). gamma 'auto' is 1/d and 'scale' is
1/(d * var(X)) over all entries of the training matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .configs import SvmConfig

_MIN_ALPHA_STEP = 1e-10
_MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class SvmClassState:
    support: np.ndarray  # (n_sv, d)
    dual_coef: np.ndarray  # (n_sv,) alpha_i * y_i
    bias: float


@dataclass(frozen=True)
class SvmState:
    kernel: str
    gamma_value: float
    degree: int
    per_class: tuple[SvmClassState, ...]


def resolve_gamma(config: SvmConfig, X: np.ndarray) -> float:
    d = X.shape[1]
    if config.gamma == "auto":
        return 1.0 / d
    if config.gamma == "scale":
        var = float(X.var())
        return 1.0 / (d * var) if var > 0 else 1.0 / d
    return float(config.gamma)


def kernel_matrix(kernel: str, gamma: float, degree: int, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if kernel == "linear":
        return A @ B.T
    if kernel == "poly":
        return (gamma * (A @ B.T) + 1.0) ** degree
    sq = (
        (A * A).sum(axis=1)[:, None]
        + (B * B).sum(axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def smo_solve(K: np.ndarray, y: np.ndarray, c: float, tol: float, max_passes: int):
    """Optimize one binary dual problem; returns (alpha, bias).

    K is the full training kernel matrix and y is in {-1, +1}.
    """
    n = len(y)
    alpha = np.zeros(n)
    bias = 0.0
    decision = np.zeros(n)  # K @ (alpha * y) + bias, maintained incrementally
    clean_passes = 0
    sweeps = 0
    while clean_passes < max_passes and sweeps < _MAX_SWEEPS:
        changed = 0
        for i in range(n):
            error_i = decision[i] - y[i]
            r = y[i] * error_i
            if not ((r < -tol and alpha[i] < c) or (r > tol and alpha[i] > 0)):
                continue
            for j in _partner_order(decision - y, i, n):
                step = _take_step(K, y, alpha, decision, bias, i, j, c)
                if step is not None:
                    bias = step
                    changed += 1
                    break
        sweeps += 1
        clean_passes = clean_passes + 1 if changed == 0 else 0
    return alpha, bias


def _partner_order(errors: np.ndarray, i: int, n: int):
    gaps = np.abs(errors - errors[i])
    gaps[i] = -1.0
    first = int(np.argmax(gaps))
    yield first
    for j in range(n):
        if j != i and j != first:
            yield j


def _take_step(K, y, alpha, decision, bias, i, j, c):
    """Joint update of alpha[i], alpha[j]; returns the new bias or None."""
    if i == j:
        return None
    a_i, a_j = alpha[i], alpha[j]
    y_i, y_j = y[i], y[j]
    e_i = decision[i] - y_i
    e_j = decision[j] - y_j
    if y_i != y_j:
        low, high = max(0.0, a_j - a_i), min(c, c + a_j - a_i)
    else:
        low, high = max(0.0, a_i + a_j - c), min(c, a_i + a_j)
    if low >= high:
        return None
    eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
    if eta <= 0:
        return None
    a_j_new = np.clip(a_j + y_j * (e_i - e_j) / eta, low, high)
    if abs(a_j_new - a_j) < _MIN_ALPHA_STEP:
        return None
    a_i_new = a_i + y_i * y_j * (a_j - a_j_new)

    b1 = bias - e_i - y_i * (a_i_new - a_i) * K[i, i] - y_j * (a_j_new - a_j) * K[i, j]
    b2 = bias - e_j - y_i * (a_i_new - a_i) * K[i, j] - y_j * (a_j_new - a_j) * K[j, j]
    if 0.0 < a_i_new < c:
        bias_new = b1
    elif 0.0 < a_j_new < c:
        bias_new = b2
    else:
        bias_new = (b1 + b2) / 2.0

    decision += (
        y_i * (a_i_new - a_i) * K[:, i]
        + y_j * (a_j_new - a_j) * K[:, j]
        + (bias_new - bias)
    )
    alpha[i] = a_i_new
    alpha[j] = a_j_new
    return bias_new


def dual_objective(K: np.ndarray, y: np.ndarray, alpha: np.ndarray) -> float:
    v = alpha * y
    return float(alpha.sum() - 0.5 * v @ K @ v)


def fit_svm(config: SvmConfig, X: np.ndarray, y_idx: np.ndarray, n_classes: int) -> SvmState:
    gamma = resolve_gamma(config, X)
    K = kernel_matrix(config.kernel, gamma, config.degree, X, X)
    states = []
    for cls in range(n_classes):
        y_bin = np.where(y_idx == cls, 1.0, -1.0)
        alpha, bias = smo_solve(K, y_bin, config.c, config.tol, config.max_passes)
        support = alpha > 0
        states.append(
            SvmClassState(
                support=X[support].copy(),
                dual_coef=(alpha * y_bin)[support],
                bias=bias,
            )
        )
    return SvmState(
        kernel=config.kernel, gamma_value=gamma, degree=config.degree, per_class=tuple(states)
    )


def decision_values(state: SvmState, X: np.ndarray) -> np.ndarray:
    scores = np.empty((X.shape[0], len(state.per_class)))
    for cls, cs in enumerate(state.per_class):
        if cs.support.shape[0] == 0:
            scores[:, cls] = cs.bias
            continue
        Kq = kernel_matrix(state.kernel, state.gamma_value, state.degree, X, cs.support)
        scores[:, cls] = Kq @ cs.dual_coef + cs.bias
    return scores


def svm_linear_loss_and_gradient(config: SvmConfig, params: np.ndarray, X, y_idx, n_classes):
    """Primal hinge form of the linear one-vs-rest objective.

    Per class: mean(max(0, 1 - y * (Xw + b))) + ||w||^2 / (2 * c * n),
    averaged over classes; the gradient uses the standard hinge
    subgradient (zero on the flat side of the kink).
    """
    n, d = X.shape
    loss_total = 0.0
    grad = np.zeros_like(params)
    for cls in range(n_classes):
        block = params[cls * (d + 1) : (cls + 1) * (d + 1)]
        w, b = block[:d], float(block[d])
        y_bin = np.where(y_idx == cls, 1.0, -1.0)
        margins = y_bin * (X @ w + b)
        slack = 1.0 - margins
        active = slack > 0
        loss_total += float(np.where(active, slack, 0.0).mean()) + float(w @ w) / (2.0 * config.c * n)
        coef = np.where(active, -y_bin, 0.0)
        grad_w = X.T @ coef / n + w / (config.c * n)
        grad_b = float(coef.mean())
        grad[cls * (d + 1) : cls * (d + 1) + d] = grad_w / n_classes
        grad[cls * (d + 1) + d] = grad_b / n_classes
    return loss_total / n_classes, grad
