"""Tests for classification metrics and fold aggregation."""

import math

import pytest

from lingforge.errors import LengthMismatch, TooFewFolds
from lingforge.evaluation.metrics import (
    aggregate_folds,
    aggregate_importance,
    compute_metrics,
    mean_and_std,
)
from lingforge.models.enums import ModelKind
from lingforge.models.results import (
    METRIC_NAMES,
    EvalMetrics,
    ImportanceEntry,
    ImportanceReport,
)


class TestComputeMetrics:
    """Test cases for compute_metrics."""

    def test_perfect(self):
        metrics = compute_metrics([0, 1, 1, 0], [0, 1, 1, 0])
        assert metrics.accuracy == 1.0
        assert metrics.macro_f1 == 1.0
        assert metrics.confusion == ((2, 0), (0, 2))

    def test_single_class_predictions(self):
        """Predicting one class for everything: precision 0 for the other."""
        metrics = compute_metrics([1, 1, 1, 1], [0, 0, 1, 1])
        assert metrics.accuracy == 0.5
        assert metrics.precision == (0.0, 0.5)
        assert metrics.recall == (0.0, 1.0)
        assert metrics.macro_f1 == pytest.approx(1 / 3)
        assert metrics.confusion == ((0, 2), (0, 2))

    def test_metric_lookup(self):
        metrics = compute_metrics([0, 1, 0], [0, 1, 1])
        assert metrics.metric("recall_dementia") == 0.5
        assert metrics.metric("precision_control") == 0.5
        assert metrics.n == 3
        with pytest.raises(KeyError):
            metrics.metric("auc")

    def test_dict_round_trip(self):
        metrics = compute_metrics([0, 1, 0, 1], [0, 1, 1, 1])
        data = metrics.to_dict()
        assert set(METRIC_NAMES) < set(data)
        assert EvalMetrics.from_dict(data) == metrics

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            compute_metrics([0, 1], [0])
        with pytest.raises(LengthMismatch):
            compute_metrics([], [])


class TestAggregation:
    """Test cases for fold aggregation."""

    def test_mean_and_sample_std(self):
        mean, std = mean_and_std([0.5, 0.7])
        assert mean == pytest.approx(0.6)
        assert std == pytest.approx(math.sqrt(0.02))

    def test_single_value(self):
        assert mean_and_std([0.3]) == (0.3, 0.0)

    def test_aggregate_folds(self):
        folds = [compute_metrics([0, 1], [0, 1]), compute_metrics([1, 1], [0, 1])]
        aggregate = aggregate_folds(folds)
        assert aggregate.n_folds == 2
        assert aggregate.metric_mean["accuracy"] == 0.75
        assert aggregate.metric_std["accuracy"] == pytest.approx(math.sqrt(0.125))
        assert aggregate.importance == ()

    def test_too_few_folds(self):
        with pytest.raises(TooFewFolds):
            aggregate_folds([compute_metrics([0, 1], [0, 1])])

    def test_importance_absent_counts_as_zero(self):
        reports = [
            ImportanceReport(ModelKind.LOGISTIC, (ImportanceEntry("a", 1.0, 1),)),
            ImportanceReport(
                ModelKind.LOGISTIC, (ImportanceEntry("a", 3.0, 1), ImportanceEntry("b", -1.0, -1))
            ),
        ]
        summaries = {s.feature: s for s in aggregate_importance(reports)}
        assert summaries["a"].mean == 2.0
        assert summaries["b"].mean == -0.5
        assert summaries["b"].n_folds_present == 1

    def test_importance_order_and_truncation(self):
        reports = [
            ImportanceReport(
                ModelKind.FOREST,
                (ImportanceEntry("x", 0.2), ImportanceEntry("y", 0.5), ImportanceEntry("z", 0.3)),
            )
        ] * 2
        assert [s.feature for s in aggregate_importance(reports, top_k=2)] == ["y", "z"]
