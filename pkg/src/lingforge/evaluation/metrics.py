"""Classification metrics and their aggregation across folds."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support

from lingforge.errors import LengthMismatch, TooFewFolds
from lingforge.models.results import (
    METRIC_NAMES,
    EvalMetrics,
    FoldAggregate,
    ImportanceReport,
    ImportanceSummary,
)

_CLASSES = [0, 1]


def compute_metrics(
    predicted: Sequence[int] | np.ndarray, true: Sequence[int] | np.ndarray
) -> EvalMetrics:
    """Accuracy, per-class and macro precision/recall/F1, and the confusion matrix.

    A class never predicted gets precision 0; macro values are unweighted
    means over the two classes.

    Raises:
        LengthMismatch: If the sequences differ in length or are empty.
    """
    y_pred = np.asarray(predicted, dtype=int)
    y_true = np.asarray(true, dtype=int)
    if y_pred.shape != y_true.shape or y_true.size == 0:
        raise LengthMismatch(
            f"Predicted ({y_pred.size}) and true ({y_true.size}) labels must be "
            "equal-length and non-empty"
        )
    precision, recall, f1, _ = precision_recall_fscore_support(
        y_true, y_pred, labels=_CLASSES, zero_division=0
    )
    cm = confusion_matrix(y_true, y_pred, labels=_CLASSES)
    return EvalMetrics(
        accuracy=float((y_pred == y_true).mean()),
        precision=(float(precision[0]), float(precision[1])),
        recall=(float(recall[0]), float(recall[1])),
        f1=(float(f1[0]), float(f1[1])),
        macro_precision=float((precision[0] + precision[1]) / 2),
        macro_recall=float((recall[0] + recall[1]) / 2),
        macro_f1=float((f1[0] + f1[1]) / 2),
        confusion=((int(cm[0, 0]), int(cm[0, 1])), (int(cm[1, 0]), int(cm[1, 1]))),
    )


def mean_and_std(values: Sequence[float]) -> tuple[float, float]:
    """Mean and sample (n-1) std, summed with ``math.fsum`` so order does not matter."""
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def aggregate_importance(
    reports: Sequence[ImportanceReport], top_k: int | None = 20
) -> tuple[ImportanceSummary, ...]:
    """Mean and std of each feature's score over folds.

    Features are aligned by name; a feature missing from a fold counts as 0
    for that fold.
    """
    names = sorted({e.feature for r in reports for e in r.entries})
    per_fold = [r.scores() for r in reports]
    summaries = []
    for name in names:
        values = [scores.get(name, 0.0) for scores in per_fold]
        mean, std = mean_and_std(values)
        present = sum(1 for scores in per_fold if name in scores)
        summaries.append(ImportanceSummary(name, mean, std, present))
    summaries.sort(key=lambda s: (-abs(s.mean), s.feature))
    return tuple(summaries if top_k is None else summaries[:top_k])


def aggregate_folds(
    fold_metrics: Sequence[EvalMetrics],
    fold_importances: Sequence[ImportanceReport] = (),
    top_k: int | None = 20,
) -> FoldAggregate:
    """Per-metric mean and sample std, plus aggregated importance.

    Raises:
        TooFewFolds: With fewer than two folds.
    """
    if len(fold_metrics) < 2:
        raise TooFewFolds(f"Fold aggregation needs at least 2 folds, got {len(fold_metrics)}")
    metric_mean: dict[str, float] = {}
    metric_std: dict[str, float] = {}
    for name in METRIC_NAMES:
        mean, std = mean_and_std([m.metric(name) for m in fold_metrics])
        metric_mean[name] = mean
        metric_std[name] = std
    return FoldAggregate(
        fold_metrics=tuple(fold_metrics),
        metric_mean=metric_mean,
        metric_std=metric_std,
        fold_importances=tuple(fold_importances),
        importance=aggregate_importance(fold_importances, top_k) if fold_importances else (),
    )
