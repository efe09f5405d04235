"""Multilayer perceptron: affine layers, rectifier hiddens, softmax out.

Training is plain full-batch gradient descent at a fixed learning rate
for exactly `max_iter` steps, minimizing the mean cross-entropy plus
alpha/(2n) times the squared weight norms (biases unpenalized). Weights
start uniform in +-sqrt(6/(fan_in+fan_out)) from the seeded generator
and biases at zero, so a (config, data, seed) triple pins the fit
bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import NonFiniteLoss
from .configs import MlpConfig


@dataclass(frozen=True)
class MlpState:
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]


def layer_sizes(config: MlpConfig, n_features: int, n_classes: int) -> list[int]:
    return [n_features, *config.hidden_layers, n_classes]


def init_params(config: MlpConfig, n_features: int, n_classes: int, seed: int):
    rng = np.random.default_rng(seed)
    sizes = layer_sizes(config, n_features, n_classes)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def _forward(weights, biases, X):
    """Returns hidden activations (post-relu) and the output logits."""
    activations = [X]
    a = X
    for W, b in zip(weights[:-1], biases[:-1]):
        a = np.maximum(a @ W + b, 0.0)
        activations.append(a)
    logits = a @ weights[-1] + biases[-1]
    return activations, logits


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _loss_and_grads(weights, biases, X, y_idx, n_classes, alpha):
    n = X.shape[0]
    activations, logits = _forward(weights, biases, X)
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    ce = float(np.mean(log_norm - shifted[np.arange(n), y_idx]))
    reg = alpha / (2.0 * n) * math.fsum(float((W * W).sum()) for W in weights)
    loss = ce + reg

    probs = softmax(logits)
    delta = probs
    delta[np.arange(n), y_idx] -= 1.0
    delta /= n

    grads_w = [None] * len(weights)
    grads_b = [None] * len(biases)
    for layer in range(len(weights) - 1, -1, -1):
        grads_w[layer] = activations[layer].T @ delta + (alpha / n) * weights[layer]
        grads_b[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ weights[layer].T) * (activations[layer] > 0)
    return loss, grads_w, grads_b


def fit_mlp(config: MlpConfig, X: np.ndarray, y_idx: np.ndarray, n_classes: int, seed: int) -> MlpState:
    weights, biases = init_params(config, X.shape[1], n_classes, seed)
    for _ in range(config.max_iter):
        loss, grads_w, grads_b = _loss_and_grads(
            weights, biases, X, y_idx, n_classes, config.alpha
        )
        if not np.isfinite(loss):
            raise NonFiniteLoss("mlp objective diverged")
        for layer in range(len(weights)):
            weights[layer] -= config.learning_rate * grads_w[layer]
            biases[layer] -= config.learning_rate * grads_b[layer]
    return MlpState(weights=tuple(weights), biases=tuple(biases))


def mlp_probabilities(state: MlpState, X: np.ndarray) -> np.ndarray:
    _, logits = _forward(state.weights, state.biases, X)
    return softmax(logits)


def flatten_params(weights, biases) -> np.ndarray:
    parts = []
    for W, b in zip(weights, biases):
        parts.append(np.asarray(W, dtype=float).ravel())
        parts.append(np.asarray(b, dtype=float).ravel())
    return np.concatenate(parts)


def unflatten_params(params: np.ndarray, sizes: list[int]):
    weights, biases = [], []
    offset = 0
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        weights.append(params[offset : offset + fan_in * fan_out].reshape(fan_in, fan_out))
        offset += fan_in * fan_out
        biases.append(params[offset : offset + fan_out])
        offset += fan_out
    if offset != params.size:
        raise ValueError(f"parameter vector has {params.size} entries, expected {offset}")
    return weights, biases


def mlp_loss_and_gradient(config: MlpConfig, params: np.ndarray, X, y_idx, n_classes):
    sizes = layer_sizes(config, X.shape[1], n_classes)
    weights, biases = unflatten_params(params, sizes)
    loss, grads_w, grads_b = _loss_and_grads(weights, biases, X, y_idx, n_classes, config.alpha)
    return loss, flatten_params(grads_w, grads_b)
