"""CART trees grown greedily: Gini for classes, SSE for residuals.

Split thresholds are midpoints between adjacent distinct sorted values,
and all argmin/argmax ties resolve to the first candidate so a fit is
a pure function of (data order, rng stream).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class Node:
    feature: int
    threshold: float
    left: object
    right: object


@dataclass(frozen=True)
class Leaf:
    value: float  # class index or regression mean


def _descend(node, row):
    while isinstance(node, Node):
        node = node.left if row[node.feature] <= node.threshold else node.right
    return node.value


def _predict_batch(root, X: np.ndarray) -> np.ndarray:
    return np.array([_descend(root, row) for row in X])


def _best_gini_split(X, yidx, idx, features, totals):
    """(feature, threshold, score) of the best Gini split, or None."""
    n = len(idx)
    best = None
    best_score = np.inf
    for f in features:
        values = X[idx, f]
        order = np.argsort(values, kind="stable")
        sorted_values = values[order]
        if sorted_values[0] == sorted_values[-1]:
            continue
        onehot = np.zeros((n, 3))
        onehot[np.arange(n), yidx[idx][order]] = 1.0
        left = np.cumsum(onehot, axis=0)[:-1]
        n_left = np.arange(1, n, dtype=np.float64)
        n_right = n - n_left
        gini_left = 1.0 - ((left / n_left[:, None]) ** 2).sum(axis=1)
        gini_right = 1.0 - (((totals - left) / n_right[:, None]) ** 2).sum(axis=1)
        score = (n_left * gini_left + n_right * gini_right) / n
        score[sorted_values[:-1] == sorted_values[1:]] = np.inf
        cut = int(np.argmin(score))
        if score[cut] < best_score:
            best_score = float(score[cut])
            best = (f, (sorted_values[cut] + sorted_values[cut + 1]) / 2.0, best_score)
    return best


def grow_classification_tree(
    X: np.ndarray,
    yidx: np.ndarray,
    rng: np.random.Generator,
    max_depth: int,
    features_per_split: int,
):
    """Gini CART over a random feature subset per node."""
    d = X.shape[1]
    n_features = min(features_per_split, d)

    def build(idx: np.ndarray, depth: int):
        counts = np.bincount(yidx[idx], minlength=3)
        majority = float(np.argmax(counts))
        if depth >= max_depth or counts.max() == len(idx) or len(idx) < 2:
            return Leaf(majority)
        features = np.sort(rng.choice(d, size=n_features, replace=False))
        best = _best_gini_split(X, yidx, idx, features, counts.astype(np.float64))
        if best is None:
            return Leaf(majority)
        feature, threshold, _ = best
        mask = X[idx, feature] <= threshold
        return Node(
            int(feature),
            float(threshold),
            build(idx[mask], depth + 1),
            build(idx[~mask], depth + 1),
        )

    return build(np.arange(len(yidx)), 0)


def _best_sse_split(X, g, idx, features):
    n = len(idx)
    best = None
    best_score = np.inf
    for f in features:
        values = X[idx, f]
        order = np.argsort(values, kind="stable")
        sorted_values = values[order]
        if sorted_values[0] == sorted_values[-1]:
            continue
        gs = g[idx][order]
        s1 = np.cumsum(gs)[:-1]
        s2 = np.cumsum(gs * gs)[:-1]
        n_left = np.arange(1, n, dtype=np.float64)
        total1, total2 = gs.sum(), (gs * gs).sum()
        sse_left = s2 - s1 * s1 / n_left
        n_right = n - n_left
        sse_right = (total2 - s2) - (total1 - s1) ** 2 / n_right
        score = sse_left + sse_right
        score[sorted_values[:-1] == sorted_values[1:]] = np.inf
        cut = int(np.argmin(score))
        if score[cut] < best_score:
            best_score = float(score[cut])
            best = (f, (sorted_values[cut] + sorted_values[cut + 1]) / 2.0, best_score)
    return best


def grow_regression_tree(X: np.ndarray, g: np.ndarray, max_depth: int):
    """Least-squares CART over all features; leaves hold the mean."""
    features = range(X.shape[1])

    def build(idx: np.ndarray, depth: int):
        mean = float(g[idx].mean())
        if depth >= max_depth or len(idx) < 2 or np.all(g[idx] == g[idx][0]):
            return Leaf(mean)
        best = _best_sse_split(X, g, idx, features)
        if best is None:
            return Leaf(mean)
        feature, threshold, _ = best
        mask = X[idx, feature] <= threshold
        return Node(
            int(feature),
            float(threshold),
            build(idx[mask], depth + 1),
            build(idx[~mask], depth + 1),
        )

    return build(np.arange(len(g)), 0)


def predict_tree(root, X: np.ndarray) -> np.ndarray:
    return _predict_batch(root, np.asarray(X, dtype=np.float64))
