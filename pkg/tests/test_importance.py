"""Tests for global feature importance."""

import numpy as np
import pytest

from lingforge.learn.forest import ForestConfig, fit_forest
from lingforge.learn.importance import model_importance, rank_entries
from lingforge.learn.logistic import LogisticModel
from lingforge.learn.standardize import StandardizerParams
from lingforge.models.enums import ModelKind
from lingforge.models.results import ImportanceEntry, ImportanceReport


def _logistic(coefficients: dict[str, float]) -> LogisticModel:
    d = len(coefficients)
    return LogisticModel(
        bias=0.0,
        coefficients=tuple(coefficients.values()),
        feature_names=tuple(coefficients),
        standardizer=StandardizerParams((0.0,) * d, (0.0,) * d, (1.0,) * d, (False,) * d),
        l2_strength=1.0,
        class_weights=(1.0, 1.0),
        n_iter=0,
        converged=True,
    )


class TestLogisticImportance:
    """Test cases for coefficient ranking."""

    def test_ranked_by_magnitude_with_sign(self):
        report = model_importance(_logistic({"a": 2.0, "b": -3.0, "c": 1.0}), top_k=None)
        assert report.features() == ["b", "a", "c"]
        assert [e.sign for e in report.entries] == [-1, 1, 1]
        assert report.model_kind is ModelKind.LOGISTIC

    def test_top_k(self):
        report = model_importance(_logistic({"a": 2.0, "b": -3.0, "c": 1.0}), top_k=2)
        assert report.features() == ["b", "a"]

    def test_all_zero_falls_back_to_name_order(self):
        report = model_importance(_logistic({"c": 0.0, "a": 0.0, "b": 0.0}))
        assert report.features() == ["a", "b", "c"]
        assert {e.sign for e in report.entries} == {0}


class TestForestImportance:
    """Test cases for MDI ranking."""

    def test_informative_feature_first(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(60, 3))
        y = (X[:, 1] > 0).astype(int)
        model = fit_forest(X, y, ForestConfig(n_trees=20), feature_names=["x", "signal", "z"])
        report = model_importance(model, top_k=None)
        assert report.features()[0] == "signal"
        assert sum(report.scores().values()) == pytest.approx(1.0)
        assert all(e.sign is None for e in report.entries)


class TestRankEntries:
    """Test cases for rank_entries."""

    def test_tie_by_name(self):
        entries = [ImportanceEntry("b", 0.5), ImportanceEntry("a", -0.5)]
        assert [e.feature for e in rank_entries(entries)] == ["a", "b"]

    def test_report_dict_round_trip(self):
        report = model_importance(_logistic({"a": 2.0, "b": -3.0}))
        assert ImportanceReport.from_dict(report.to_dict()) == report
