"""Evaluation protocols, metrics and fold aggregation."""

from lingforge.evaluation.metrics import (
    aggregate_folds,
    aggregate_importance,
    compute_metrics,
    mean_and_std,
)
from lingforge.evaluation.runner import (
    ExperimentResult,
    FoldResult,
    ModelSpec,
    evaluate_plan,
    run_experiment,
    run_subject_cv,
    run_transcript_split,
)
from lingforge.evaluation.splits import (
    assert_group_disjoint,
    class_test_count,
    group_kfold,
    stratified_split,
)

__all__ = [
    "ExperimentResult",
    "FoldResult",
    "ModelSpec",
    "aggregate_folds",
    "aggregate_importance",
    "assert_group_disjoint",
    "class_test_count",
    "compute_metrics",
    "evaluate_plan",
    "group_kfold",
    "mean_and_std",
    "run_experiment",
    "run_subject_cv",
    "run_transcript_split",
    "stratified_split",
]
