"""Shared learner configuration and the fixed three-class label space."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

# Class values in ascending order; ties everywhere resolve to the
# smaller value, i.e. the earlier index.
CLASSES = (0.0, 0.5, 1.0)


class ConfigError(ValueError):
    """A learner or run option is out of its documented range."""


def class_indices(y) -> np.ndarray:
    """Map labels {0.0, 0.5, 1.0} to indices {0, 1, 2}."""
    y = np.asarray(y, dtype=np.float64)
    idx = np.rint(y * 2).astype(np.intp)
    if idx.ndim != 1 or np.any((y * 2) != idx) or idx.min(initial=0) < 0 or idx.max(initial=0) > 2:
        raise ConfigError(f"labels must be drawn from {CLASSES}")
    return idx


def canonical_order(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row order sorted by feature vector then label.

    Fitting after this sort makes tree learners invariant to the,
    arbitrary, order rows arrived in.
    """
    keys = tuple(X[:, col] for col in range(X.shape[1] - 1, -1, -1))
    return np.lexsort((y,) + keys)


def derive_seed(*entropy) -> int:
    """Stable child seed for a (seed, unit-id, ...) tuple."""
    words = [int(e) & 0xFFFFFFFF for e in entropy]
    return int(np.random.SeedSequence(words).generate_state(1)[0])


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparameters for any of the three model kinds.

    Only the fields for `kind` are consulted; the rest keep their
    defaults so one config type serves the whole CLI.
    """

    kind: str = "knn"
    k: Optional[int] = None
    n_trees: int = 100
    max_depth: int = 12
    features_per_split: int = 3
    n_rounds: int = 100
    learning_rate: float = 0.1
    tree_depth: int = 3
    seed: int = 0

    def validate(self) -> None:
        if self.kind not in ("knn", "rf", "gbt"):
            raise ConfigError(f"unknown model kind {self.kind!r}")
        if self.kind == "knn":
            if self.k is None or self.k < 1:
                raise ConfigError(f"k must be a positive int, got {self.k}")
        if self.n_trees < 1:
            raise ConfigError(f"n_trees must be positive, got {self.n_trees}")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be positive, got {self.max_depth}")
        if self.features_per_split < 1:
            raise ConfigError(
                f"features_per_split must be positive, got {self.features_per_split}"
            )
        if self.n_rounds < 1:
            raise ConfigError(f"n_rounds must be positive, got {self.n_rounds}")
        if not 0 < self.learning_rate <= 1:
            raise ConfigError(f"learning_rate must be in (0, 1], got {self.learning_rate}")
        if self.tree_depth < 1:
            raise ConfigError(f"tree_depth must be positive, got {self.tree_depth}")
