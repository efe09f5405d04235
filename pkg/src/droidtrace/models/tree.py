"""Binary decision tree grown by recursive impurity-minimizing splits.

Candidate thresholds are midpoints between consecutive distinct sorted
values of each feature. The split with the largest impurity decrease
wins; exact ties go to the lowest feature index, then the lowest
threshold. Because gini and entropy are concave, a split's decrease is
never negative, and a node with any candidate split at all is worth
splitting: zero-decrease splits are taken too, which is what lets the
tree carve out parity-style datasets (no single split helps, two do).
Growth stops at pure nodes, the depth cap, or nodes whose rows are
identical in every feature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .configs import TreeConfig


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    counts: Optional[np.ndarray] = None  # class counts; set on leaves

    @property
    def is_leaf(self) -> bool:
        return self.counts is not None


@dataclass(frozen=True)
class TreeState:
    root: TreeNode


def _impurity(counts: np.ndarray, criterion: str) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    if criterion == "gini":
        return 1.0 - float((p * p).sum())
    return float(-(p * np.log2(p)).sum())


def _best_split(X, y_idx, n_classes, criterion):
    """Returns (feature, threshold, left_row_mask) or None."""
    n = X.shape[0]
    parent_counts = np.bincount(y_idx, minlength=n_classes)
    parent_impurity = _impurity(parent_counts, criterion)
    best_gain = -1.0
    best = None
    for feature in range(X.shape[1]):
        column = X[:, feature]
        order = np.argsort(column, kind="stable")
        sorted_vals = column[order]
        sorted_y = y_idx[order]
        left_counts = np.zeros(n_classes, dtype=np.int64)
        for i in range(1, n):
            left_counts[sorted_y[i - 1]] += 1
            if sorted_vals[i] <= sorted_vals[i - 1]:
                continue
            right_counts = parent_counts - left_counts
            weighted = (
                i * _impurity(left_counts, criterion)
                + (n - i) * _impurity(right_counts, criterion)
            ) / n
            gain = parent_impurity - weighted
            if gain > best_gain:
                threshold = (sorted_vals[i - 1] + sorted_vals[i]) / 2.0
                best_gain = gain
                best = (feature, float(threshold))
    if best is None:
        return None
    feature, threshold = best
    return feature, threshold, X[:, feature] <= threshold


def _grow(X, y_idx, n_classes, criterion, max_depth, depth) -> TreeNode:
    counts = np.bincount(y_idx, minlength=n_classes)
    if np.count_nonzero(counts) <= 1 or (max_depth is not None and depth >= max_depth):
        return TreeNode(counts=counts)
    split = _best_split(X, y_idx, n_classes, criterion)
    if split is None:
        return TreeNode(counts=counts)
    feature, threshold, left_mask = split
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=_grow(X[left_mask], y_idx[left_mask], n_classes, criterion, max_depth, depth + 1),
        right=_grow(X[~left_mask], y_idx[~left_mask], n_classes, criterion, max_depth, depth + 1),
    )


def fit_tree(config: TreeConfig, X: np.ndarray, y_idx: np.ndarray, n_classes: int) -> TreeState:
    return TreeState(root=_grow(X, y_idx, n_classes, config.criterion, config.max_depth, 0))


def predict_tree(state: TreeState, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0], dtype=np.intp)
    for i, row in enumerate(X):
        node = state.root
        while not node.is_leaf:
            node = node.left if row[node.feature] <= node.threshold else node.right
        out[i] = int(np.argmax(node.counts))
    return out


def tree_depth(node: TreeNode) -> int:
    """Number of split levels below this node (a lone leaf is depth 0)."""
    if node.is_leaf:
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"counts": [int(c) for c in node.counts]}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": node_to_dict(node.left),
        "right": node_to_dict(node.right),
    }


def node_from_dict(data: dict) -> TreeNode:
    if "counts" in data:
        return TreeNode(counts=np.array(data["counts"], dtype=np.int64))
    return TreeNode(
        feature=int(data["feature"]),
        threshold=float(data["threshold"]),
        left=node_from_dict(data["left"]),
        right=node_from_dict(data["right"]),
    )
