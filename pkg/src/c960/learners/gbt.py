"""Gradient-boosted regression trees, one score ensemble per class.

Each round fits one small SSE tree per class to that class's softmax
cross-entropy negative gradient (one-hot minus softmax) and adds its
predictions scaled by the learning rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import CLASSES, ModelConfig, canonical_order, class_indices
from .tree import grow_regression_tree, predict_tree


def softmax(scores: np.ndarray) -> np.ndarray:
    z = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def log_loss(scores: np.ndarray, yidx: np.ndarray) -> float:
    p = softmax(scores)
    return float(-np.log(p[np.arange(len(yidx)), yidx] + 1e-300).mean())


@dataclass(frozen=True)
class GbtModel:
    rounds: tuple  # each entry: one regression tree per class
    config: ModelConfig
    # Per-round copies of the residual matrices actually fitted; filled
    # only when fit with record_targets=True.
    fitted_targets: tuple = field(default=())

    def staged_scores(self, queries) -> np.ndarray:
        """Raw class scores after every round, shape (rounds, n, 3)."""
        Q = np.asarray(queries, dtype=np.float64)
        scores = np.zeros((len(Q), 3))
        out = []
        for trees in self.rounds:
            for c, tree in enumerate(trees):
                scores[:, c] += self.config.learning_rate * predict_tree(tree, Q)
            out.append(scores.copy())
        return np.array(out)


def gbt_fit(train_X, train_y, cfg: ModelConfig, record_targets: bool = False) -> GbtModel:
    cfg.validate()
    X = np.asarray(train_X, dtype=np.float64)
    yidx = class_indices(train_y)
    order = canonical_order(X, yidx)
    X, yidx = X[order], yidx[order]
    n = len(yidx)
    onehot = np.zeros((n, 3))
    onehot[np.arange(n), yidx] = 1.0

    scores = np.zeros((n, 3))
    rounds = []
    targets = []
    for _ in range(cfg.n_rounds):
        residual = onehot - softmax(scores)
        if record_targets:
            targets.append(residual.copy())
        trees = []
        for c in range(3):
            tree = grow_regression_tree(X, residual[:, c], cfg.tree_depth)
            scores[:, c] += cfg.learning_rate * predict_tree(tree, X)
            trees.append(tree)
        rounds.append(tuple(trees))
    return GbtModel(tuple(rounds), cfg, tuple(targets))


def gbt_raw_scores(model: GbtModel, queries) -> np.ndarray:
    Q = np.asarray(queries, dtype=np.float64)
    scores = np.zeros((len(Q), 3))
    for trees in model.rounds:
        for c, tree in enumerate(trees):
            scores[:, c] += model.config.learning_rate * predict_tree(tree, Q)
    return scores


def gbt_predict(model: GbtModel, queries) -> np.ndarray:
    """Highest-scoring class; ties to the smaller class value."""
    scores = gbt_raw_scores(model, queries)
    return np.array([CLASSES[i] for i in np.argmax(scores, axis=1)])
