"""Tests for split construction and the leakage guard."""

import pytest

from lingforge.errors import (
    ClassTooSmall,
    ConfigError,
    LeakageError,
    MissingSubjectIds,
    TooFewSubjects,
)
from lingforge.evaluation.splits import (
    assert_group_disjoint,
    class_test_count,
    group_kfold,
    stratified_split,
)
from lingforge.models.enums import SplitKind
from lingforge.models.results import SplitPlan


class TestStratifiedSplit:
    """Test cases for stratified_split."""

    def test_balanced_classes(self):
        labels = [0] * 50 + [1] * 50
        plan = stratified_split(labels, 0.2, seed=42)
        test_labels = [labels[i] for i in plan.test_indices]
        assert len(plan.test_indices) == 20
        assert test_labels.count(0) == 10
        assert test_labels.count(1) == 10
        assert plan.kind is SplitKind.TRANSCRIPT_STRATIFIED

    def test_unbalanced_rounding(self):
        labels = [0] * 243 + [1] * 257
        plan = stratified_split(labels, 0.2, seed=1)
        test_labels = [labels[i] for i in plan.test_indices]
        assert (test_labels.count(0), test_labels.count(1)) == (49, 51)

    def test_partition(self):
        plan = stratified_split([0, 1] * 20, 0.25, seed=3)
        assert sorted(plan.train_indices + plan.test_indices) == list(range(40))
        assert plan.n_rows == 40

    def test_same_seed_same_plan(self):
        labels = [0] * 30 + [1] * 30
        assert stratified_split(labels, 0.2, 9) == stratified_split(labels, 0.2, 9)
        assert stratified_split(labels, 0.2, 9) != stratified_split(labels, 0.2, 10)

    def test_class_too_small(self):
        with pytest.raises(ClassTooSmall, match="control"):
            stratified_split([0, 0, 1, 1, 1], 0.2)

    @pytest.mark.parametrize("fraction", [0.0, 1.0, 1.5])
    def test_bad_fraction(self, fraction):
        with pytest.raises(ConfigError):
            stratified_split([0, 1] * 10, fraction)

    def test_half_rounds_up(self):
        assert class_test_count(5, 0.5) == 3
        assert class_test_count(3, 0.5) == 2
        assert class_test_count(2, 0.2) == 0


class TestGroupKFold:
    """Test cases for subject-grouped folds."""

    def test_one_row_per_subject(self):
        subjects = [f"S{i:02d}" for i in range(10)]
        plans = group_kfold(subjects, 5)
        assert [len(p.test_indices) for p in plans] == [2] * 5
        tested = sorted(i for p in plans for i in p.test_indices)
        assert tested == list(range(10))

    def test_sessions_stay_together(self):
        subjects = ["a", "a", "b", "b", "b", "c", "d", "d", "e", "f"]
        for plan in group_kfold(subjects, 3):
            train = {subjects[i] for i in plan.train_indices}
            test = {subjects[i] for i in plan.test_indices}
            assert not train & test
            assert plan.kind is SplitKind.SUBJECT_GROUPED

    def test_deterministic(self):
        subjects = [f"S{i % 7}" for i in range(20)]
        assert group_kfold(subjects, 5) == group_kfold(subjects, 5)

    def test_too_few_subjects(self):
        with pytest.raises(TooFewSubjects):
            group_kfold(["a", "b", "c"], 5)

    def test_missing_subject_id(self):
        with pytest.raises(MissingSubjectIds):
            group_kfold(["a", "", "b", "c", "d", "e"], 2)

    def test_fold_count(self):
        with pytest.raises(ConfigError):
            group_kfold(["a", "b"], 1)


class TestLeakageGuard:
    """Test cases for assert_group_disjoint."""

    def test_shared_subject(self):
        plan = SplitPlan((0, 1), (2,), SplitKind.SUBJECT_GROUPED, fold_id=0)
        with pytest.raises(LeakageError, match="'a'"):
            assert_group_disjoint(plan, ["a", "b", "a"])

    def test_disjoint(self):
        plan = SplitPlan((0, 1), (2,), SplitKind.SUBJECT_GROUPED, fold_id=0)
        assert_group_disjoint(plan, ["a", "b", "c"])

    def test_overlapping_rows_rejected(self):
        with pytest.raises(ValueError):
            SplitPlan((0, 1), (1,), SplitKind.TRANSCRIPT_STRATIFIED)
