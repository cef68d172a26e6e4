"""k-nearest-neighbour voting over the three result classes."""

from __future__ import annotations

import numpy as np

from .config import CLASSES, ConfigError, class_indices


def knn_classify(train_X, train_y, query, k: int) -> float:
    """Majority label of the k nearest training rows.

    Neighbours are ranked by Euclidean distance with training index as
    the tiebreak; vote ties go to the smaller class value.
    """
    X = np.asarray(train_X, dtype=np.float64)
    if not 1 <= k <= len(X):
        raise ConfigError(f"k must be in [1, {len(X)}], got {k}")
    yidx = class_indices(train_y)
    q = np.asarray(query, dtype=np.float64)
    d2 = ((X - q) ** 2).sum(axis=1)
    order = np.argsort(d2, kind="stable")  # stable = index tiebreak
    votes = np.bincount(yidx[order[:k]], minlength=3)
    return CLASSES[int(np.argmax(votes))]


def knn_predict(train_X, train_y, queries, k: int) -> np.ndarray:
    """knn_classify over the rows of `queries`."""
    Q = np.asarray(queries, dtype=np.float64)
    return np.array([knn_classify(train_X, train_y, q, k) for q in Q])
