"""From-scratch classifiers and their cross-validation harness."""

from .config import (
    CLASSES,
    ConfigError,
    ModelConfig,
    canonical_order,
    class_indices,
    derive_seed,
)
from .evaluate import POOLED, EvalReport, evaluate, stratified_folds
from .forest import ForestModel, rf_fit, rf_predict
from .gbt import GbtModel, gbt_fit, gbt_predict, gbt_raw_scores, log_loss, softmax
from .knn import knn_classify, knn_predict

__all__ = [
    "CLASSES",
    "ConfigError",
    "ModelConfig",
    "canonical_order",
    "class_indices",
    "derive_seed",
    "POOLED",
    "EvalReport",
    "evaluate",
    "stratified_folds",
    "ForestModel",
    "rf_fit",
    "rf_predict",
    "GbtModel",
    "gbt_fit",
    "gbt_predict",
    "gbt_raw_scores",
    "log_loss",
    "softmax",
    "knn_classify",
    "knn_predict",
]
