"""Tests for importance/association cross-checks."""

import pytest

from lingforge.models.results import AssociationResult, ImportanceEntry
from lingforge.stats.consistency import importance_consistency, ranking_overlap


def _assoc(name: str, delta: float, p_adj: float) -> AssociationResult:
    return AssociationResult(name, 0.0, 0.0, delta, 0.0, p_adj, p_adj)


class TestRankingOverlap:
    """Test cases for ranking_overlap."""

    def test_partial_overlap(self):
        overlap = ranking_overlap(["a", "b", "c", "d"], ["c", "x", "a"], k=3)
        assert overlap.shared == ("a", "c")
        assert overlap.only_a == ("b",)
        assert overlap.only_b == ("x",)
        assert overlap.jaccard == pytest.approx(2 / 4)

    def test_identical(self):
        assert ranking_overlap(["a", "b"], ["b", "a"]).jaccard == 1.0

    def test_empty(self):
        overlap = ranking_overlap([], [])
        assert overlap.jaccard == 0.0
        assert overlap.to_dict()["shared"] == []


class TestImportanceConsistency:
    """Test cases for importance_consistency."""

    def test_positive_coefficient_agrees_with_dementia_higher(self):
        rows = importance_consistency(
            [ImportanceEntry("ADV", 1.2, 1), ImportanceEntry("NOUN", -0.8, -1)],
            [_assoc("ADV", -0.6, 0.001), _assoc("NOUN", -0.3, 0.2)],
        )
        adv, noun = rows
        assert adv.direction_agrees is True
        assert adv.significant is True
        assert noun.direction_agrees is False
        assert noun.significant is False

    def test_untested_feature(self):
        (row,) = importance_consistency([ImportanceEntry("TTR", 0.5, 1)], [])
        assert row.cliffs_delta is None
        assert row.direction_agrees is None
        assert row.significant is False

    def test_unsigned_importance(self):
        (row,) = importance_consistency(
            [ImportanceEntry("ADV", 0.3)], [_assoc("ADV", -0.6, 0.001)]
        )
        assert row.direction_agrees is None
        assert row.significant is True

    def test_zero_delta_has_no_direction(self):
        (row,) = importance_consistency([ImportanceEntry("X", 0.3, 1)], [_assoc("X", 0.0, 1.0)])
        assert row.direction_agrees is None

    def test_alpha(self):
        (row,) = importance_consistency(
            [ImportanceEntry("ADV", 0.3, 1)], [_assoc("ADV", -0.6, 0.04)], alpha=0.01
        )
        assert row.significant is False
        assert row.to_dict()["p_adj"] == 0.04
