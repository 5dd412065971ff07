"""Train/test split construction and the subject leakage guard."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from sklearn.model_selection import GroupKFold

from lingforge.errors import (
    ClassTooSmall,
    ConfigError,
    LeakageError,
    MissingSubjectIds,
    TooFewSubjects,
)
from lingforge.models.enums import Label, SplitKind
from lingforge.models.results import SplitPlan

logger = logging.getLogger(__name__)


def class_test_count(class_count: int, test_fraction: float) -> int:
    """``round(class_count * test_fraction)`` with halves rounded up."""
    return math.floor(class_count * test_fraction + 0.5)


def stratified_split(
    labels: Sequence[int] | np.ndarray, test_fraction: float = 0.2, seed: int = 42
) -> SplitPlan:
    """Stratified transcript-level split.

    Each class is shuffled with a generator seeded by ``seed`` and its first
    ``round(count * test_fraction)`` rows go to the test side.

    Raises:
        ClassTooSmall: If a class is absent or would leave an empty side.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ConfigError(f"test_fraction must be in (0, 1), got {test_fraction}")
    y = np.asarray(labels, dtype=int)
    rng = np.random.default_rng(seed)
    train: list[int] = []
    test: list[int] = []
    for code in (0, 1):
        rows = np.flatnonzero(y == code)
        n_test = class_test_count(rows.size, test_fraction)
        if n_test == 0 or n_test == rows.size:
            raise ClassTooSmall(
                f"Class {Label.from_code(code)} has {rows.size} row(s); a "
                f"{test_fraction:g} test fraction leaves an empty train or test side"
            )
        shuffled = rng.permutation(rows)
        test.extend(int(i) for i in shuffled[:n_test])
        train.extend(int(i) for i in shuffled[n_test:])
    return SplitPlan(
        train_indices=tuple(sorted(train)),
        test_indices=tuple(sorted(test)),
        kind=SplitKind.TRANSCRIPT_STRATIFIED,
        seed=seed,
    )


def group_kfold(subject_ids: Sequence[str], k: int = 5) -> list[SplitPlan]:
    """Subject-grouped folds.

    Subjects are assigned largest-first to the fold with the fewest rows so
    far; no randomness is involved. Every plan passes the leakage guard.

    Raises:
        MissingSubjectIds: If any row lacks a subject id.
        TooFewSubjects: With fewer distinct subjects than ``k``.
    """
    if k < 2:
        raise ConfigError(f"folds must be >= 2, got {k}")
    groups = list(subject_ids)
    if any(not g for g in groups):
        raise MissingSubjectIds("Grouped evaluation requires a subject_id on every row")
    n_subjects = len(set(groups))
    if n_subjects < k:
        raise TooFewSubjects(f"{n_subjects} distinct subject(s) for {k} folds")

    splitter = GroupKFold(n_splits=k)
    folds = splitter.split(np.zeros((len(groups), 1)), groups=groups)
    plans = []
    for fold_id, (train, test) in enumerate(folds):
        plan = SplitPlan(
            train_indices=tuple(sorted(int(i) for i in train)),
            test_indices=tuple(sorted(int(i) for i in test)),
            kind=SplitKind.SUBJECT_GROUPED,
            fold_id=fold_id,
        )
        assert_group_disjoint(plan, groups)
        plans.append(plan)
    logger.debug("Grouped folds: test sizes %s", [len(p.test_indices) for p in plans])
    return plans


def assert_group_disjoint(plan: SplitPlan, subject_ids: Sequence[str]) -> None:
    """Raise LeakageError if any subject has rows on both sides of ``plan``."""
    train_subjects = {subject_ids[i] for i in plan.train_indices}
    test_subjects = {subject_ids[i] for i in plan.test_indices}
    shared = train_subjects & test_subjects
    if shared:
        raise LeakageError(
            f"Subject(s) on both sides of fold {plan.fold_id}: {sorted(shared)[:10]}"
        )
