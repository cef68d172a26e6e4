"""Stratified k-fold accuracy over per-start-position feature tables."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .config import CLASSES, ConfigError, ModelConfig, class_indices, derive_seed
from .forest import rf_fit, rf_predict
from .gbt import gbt_fit, gbt_predict
from .knn import knn_predict

# Table key used when a whole dataset is evaluated as one pooled table.
POOLED = -1


@dataclass(frozen=True)
class EvalReport:
    """Cross-validation accuracies plus a pooled confusion matrix.

    `per_table` maps table key (start-position index, or POOLED) to the
    table's CV accuracy: correct predictions over all its folds divided
    by its row count. `overall_accuracy` is the confusion-matrix trace
    over the grand total.
    """

    model_kind: str
    folds: int
    seed: int
    per_table: dict
    summary: dict
    confusion: tuple
    overall_accuracy: float
    skipped: tuple

    def as_dict(self) -> dict:
        return {
            "model": self.model_kind,
            "folds": self.folds,
            "seed": self.seed,
            "per_table": [
                {"table": k, "accuracy": v} for k, v in sorted(self.per_table.items())
            ],
            "summary": self.summary,
            "confusion": [list(row) for row in self.confusion],
            "overall_accuracy": self.overall_accuracy,
            "skipped": [{"table": k, "reason": r} for k, r in self.skipped],
            "classes": list(CLASSES),
        }


def stratified_folds(yidx: np.ndarray, folds: int, rng: np.random.Generator) -> list:
    """Deal each class's shuffled rows round-robin over the folds.

    The dealing pointer carries over between classes, so fold sizes
    differ by at most one even when class counts do not divide evenly.
    """
    assignment = [[] for _ in range(folds)]
    pointer = 0
    for c in range(3):
        members = np.flatnonzero(yidx == c)
        rng.shuffle(members)
        for row in members:
            assignment[pointer % folds].append(int(row))
            pointer += 1
    return [np.array(sorted(fold), dtype=np.intp) for fold in assignment]


def _predict(cfg: ModelConfig, train_X, train_y, test_X, fit_seed: int) -> np.ndarray:
    if cfg.kind == "knn":
        return knn_predict(train_X, train_y, test_X, cfg.k)
    seeded = ModelConfig(**{**cfg.__dict__, "seed": fit_seed})
    if cfg.kind == "rf":
        return rf_predict(rf_fit(train_X, train_y, seeded), test_X)
    return gbt_predict(gbt_fit(train_X, train_y, seeded), test_X)


def evaluate(tables, cfg: ModelConfig, folds: int = 5) -> EvalReport:
    """Per-table stratified CV accuracy plus mean/median/max summary.

    `tables` is a mapping of table key to FeatureTable, or a single
    FeatureTable evaluated under the POOLED key. Tables with fewer rows
    than folds are skipped, with the reason recorded.
    """
    cfg.validate()
    if folds < 2:
        raise ConfigError(f"folds must be at least 2, got {folds}")
    if not isinstance(tables, Mapping):
        tables = {POOLED: tables}

    per_table: dict = {}
    skipped: list = []
    confusion = np.zeros((3, 3), dtype=np.int64)
    for key in sorted(tables):
        table = tables[key]
        if len(table.rows) < folds:
            skipped.append((key, f"{len(table.rows)} rows < {folds} folds"))
            continue
        if cfg.kind == "knn":
            # the largest test fold leaves the smallest training set
            smallest_train = len(table.rows) - -(-len(table.rows) // folds)
            if cfg.k > smallest_train:
                skipped.append((key, f"k={cfg.k} exceeds a {smallest_train}-row training fold"))
                continue
        X = np.array([row.features for row in table.rows], dtype=np.float64)
        y = np.array([row.label for row in table.rows], dtype=np.float64)
        yidx = class_indices(y)
        rng = np.random.default_rng([cfg.seed & 0xFFFFFFFF, key & 0xFFFFFFFF])
        correct = 0
        for fold_index, test_rows in enumerate(stratified_folds(yidx, folds, rng)):
            if len(test_rows) == 0:
                continue
            mask = np.ones(len(y), dtype=bool)
            mask[test_rows] = False
            fit_seed = derive_seed(cfg.seed, key, fold_index)
            predicted = _predict(cfg, X[mask], y[mask], X[test_rows], fit_seed)
            pidx = class_indices(predicted)
            for t, p in zip(yidx[test_rows], pidx):
                confusion[t, p] += 1
            correct += int((predicted == y[test_rows]).sum())
        per_table[key] = correct / len(y)

    if per_table:
        values = list(per_table.values())
        summary = {
            "mean": statistics.fmean(values),
            "median": statistics.median(values),
            "max": max(values),
        }
    else:
        summary = {"mean": float("nan"), "median": float("nan"), "max": float("nan")}
    total = int(confusion.sum())
    overall = float(np.trace(confusion) / total) if total else float("nan")
    return EvalReport(
        model_kind=cfg.kind,
        folds=folds,
        seed=cfg.seed,
        per_table=per_table,
        summary=summary,
        confusion=tuple(tuple(int(v) for v in row) for row in confusion),
        overall_accuracy=overall,
        skipped=tuple(skipped),
    )
