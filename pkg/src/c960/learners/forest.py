"""Bootstrap forest of Gini trees with per-node feature sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import CLASSES, ModelConfig, canonical_order, class_indices
from .tree import grow_classification_tree, predict_tree


@dataclass(frozen=True)
class ForestModel:
    trees: tuple
    config: ModelConfig


def rf_fit(train_X, train_y, cfg: ModelConfig) -> ForestModel:
    """Fit cfg.n_trees trees on same-size bootstrap resamples.

    Rows are pre-sorted canonically and each tree draws from its own
    (seed, tree-index) stream, so fits do not depend on row order or
    on whether trees are grown serially.
    """
    cfg.validate()
    X = np.asarray(train_X, dtype=np.float64)
    yidx = class_indices(train_y)
    order = canonical_order(X, yidx)
    X, yidx = X[order], yidx[order]
    n = len(yidx)
    trees = []
    for t in range(cfg.n_trees):
        rng = np.random.default_rng([cfg.seed & 0xFFFFFFFF, t])
        sample = rng.integers(0, n, size=n)
        trees.append(
            grow_classification_tree(
                X[sample], yidx[sample], rng, cfg.max_depth, cfg.features_per_split
            )
        )
    return ForestModel(tuple(trees), cfg)


def rf_predict(model: ForestModel, queries) -> np.ndarray:
    """Plurality vote across trees; ties to the smaller class value."""
    Q = np.asarray(queries, dtype=np.float64)
    votes = np.zeros((len(Q), 3))
    for tree in model.trees:
        picks = predict_tree(tree, Q).astype(np.intp)
        votes[np.arange(len(Q)), picks] += 1
    return np.array([CLASSES[i] for i in np.argmax(votes, axis=1)])
