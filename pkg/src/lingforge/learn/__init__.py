"""Interpretable classifiers: logistic regression and random forest.

Both models fit on raw feature rows. MISSING cells are imputed with medians
learned from the training rows only; the logistic model also z-scores.
"""

from lingforge.learn.forest import DecisionTree, ForestConfig, ForestModel, fit_forest, fit_tree
from lingforge.learn.importance import (
    forest_mdi_importance,
    logistic_importance,
    model_importance,
    rank_entries,
)
from lingforge.learn.logistic import (
    LogisticConfig,
    LogisticModel,
    balanced_class_weights,
    fit_logistic,
    logistic_loss_and_grad,
    predict_logistic,
)
from lingforge.learn.standardize import StandardizerParams, apply_standardizer, fit_standardizer

__all__ = [
    "DecisionTree",
    "ForestConfig",
    "ForestModel",
    "LogisticConfig",
    "LogisticModel",
    "StandardizerParams",
    "apply_standardizer",
    "balanced_class_weights",
    "fit_forest",
    "fit_logistic",
    "fit_standardizer",
    "fit_tree",
    "forest_mdi_importance",
    "logistic_importance",
    "logistic_loss_and_grad",
    "model_importance",
    "predict_logistic",
    "rank_entries",
]
