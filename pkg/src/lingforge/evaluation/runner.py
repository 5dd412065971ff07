"""Evaluation protocols: transcript-level split and subject-grouped CV.

Every model, including its imputation and scaling parameters, is fitted on
the training rows of a plan only; test rows are touched for prediction alone.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from lingforge.evaluation.metrics import aggregate_folds, compute_metrics
from lingforge.evaluation.splits import assert_group_disjoint, group_kfold, stratified_split
from lingforge.learn.forest import ForestConfig, ForestModel, fit_forest
from lingforge.learn.importance import model_importance
from lingforge.learn.logistic import LogisticConfig, LogisticModel, fit_logistic
from lingforge.models.config import RunConfig
from lingforge.models.enums import ModelKind, Protocol, Representation
from lingforge.models.features import FeatureMatrix
from lingforge.models.results import (
    EvalMetrics,
    FoldAggregate,
    ImportanceReport,
    SplitPlan,
)

logger = logging.getLogger(__name__)

Model = LogisticModel | ForestModel


@dataclass(frozen=True)
class ModelSpec:
    """Which classifier to fit and with what hyperparameters."""

    kind: ModelKind = ModelKind.LOGISTIC
    logistic: LogisticConfig = field(default_factory=LogisticConfig)
    forest: ForestConfig = field(default_factory=ForestConfig)

    @classmethod
    def from_run_config(cls, config: RunConfig) -> ModelSpec:
        return cls(
            kind=config.model,
            logistic=LogisticConfig(
                l2_strength=config.l2_strength, max_iter=config.max_iter, tol=config.tol
            ),
            forest=ForestConfig(
                n_trees=config.n_trees,
                min_leaf=config.min_leaf,
                max_depth=config.max_depth,
                seed=config.seed,
                threads=config.threads,
            ),
        )

    def fit(self, X: np.ndarray, y: np.ndarray, feature_names: tuple[str, ...]) -> Model:
        if self.kind is ModelKind.LOGISTIC:
            return fit_logistic(X, y, self.logistic, feature_names)
        return fit_forest(X, y, self.forest, feature_names)


@dataclass(frozen=True)
class FoldResult:
    """Outcome of one train/test plan.

    ``importance`` is the full ranking; reports truncate it.
    """

    plan: SplitPlan
    metrics: EvalMetrics
    importance: ImportanceReport
    model: Model

    def to_dict(self, top_k: int | None = 20) -> dict[str, Any]:
        ranked = ImportanceReport(
            self.importance.model_kind,
            self.importance.entries[:top_k] if top_k is not None else self.importance.entries,
            top_k,
        )
        return {
            "split": self.plan.to_dict(),
            "metrics": self.metrics.to_dict(),
            "importance": ranked.to_dict(),
        }


@dataclass(frozen=True)
class ExperimentResult:
    """All folds of one protocol run, plus the fold aggregate for CV."""

    protocol: Protocol
    model_kind: ModelKind
    representation: Representation
    seed: int
    folds: tuple[FoldResult, ...]
    aggregate: FoldAggregate | None = None
    top_k: int = 20

    @property
    def metrics(self) -> EvalMetrics:
        """Single-split metrics (the first fold for CV)."""
        return self.folds[0].metrics

    def headline(self, name: str) -> tuple[float, float | None]:
        """Metric value and, for CV, its fold std."""
        if self.aggregate is not None:
            return self.aggregate.metric_mean[name], self.aggregate.metric_std[name]
        return self.metrics.metric(name), None

    def top_features(self) -> list[tuple[str, float]]:
        """Ranked ``(feature, score)`` pairs: fold means for CV, else the split model."""
        if self.aggregate is not None:
            return [(s.feature, s.mean) for s in self.aggregate.importance]
        return [(e.feature, e.score) for e in self.folds[0].importance.entries[: self.top_k]]

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "protocol": self.protocol.value,
            "model_kind": self.model_kind.value,
            "representation": self.representation.value,
            "seed": self.seed,
            "top_k": self.top_k,
            "folds": [f.to_dict(self.top_k) for f in self.folds],
        }
        if self.aggregate is not None:
            data["aggregate"] = {
                "n_folds": self.aggregate.n_folds,
                "metric_mean": dict(self.aggregate.metric_mean),
                "metric_std": dict(self.aggregate.metric_std),
                "importance": [s.to_dict() for s in self.aggregate.importance],
            }
        return data


def evaluate_plan(
    matrix: FeatureMatrix,
    plan: SplitPlan,
    spec: ModelSpec,
    X: np.ndarray | None = None,
) -> FoldResult:
    """Fit on the plan's training rows and score its test rows."""
    X = matrix.to_array() if X is None else X
    y = matrix.labels()
    train = np.asarray(plan.train_indices, dtype=int)
    test = np.asarray(plan.test_indices, dtype=int)
    model = spec.fit(X[train], y[train], matrix.feature_names)
    predicted = model.predict(X[test])
    metrics = compute_metrics(predicted, y[test])
    logger.info(
        "Fold %s: %d train / %d test rows, accuracy %.3f",
        plan.fold_id if plan.fold_id is not None else "split",
        train.size,
        test.size,
        metrics.accuracy,
    )
    return FoldResult(plan, metrics, model_importance(model, top_k=None), model)


def run_transcript_split(
    matrix: FeatureMatrix,
    spec: ModelSpec | None = None,
    test_fraction: float = 0.2,
    seed: int = 42,
    top_k: int = 20,
) -> ExperimentResult:
    """Stratified transcript-level split; subjects may appear on both sides."""
    spec = spec or ModelSpec()
    plan = stratified_split(matrix.labels(), test_fraction, seed)
    fold = evaluate_plan(matrix, plan, spec)
    return ExperimentResult(
        Protocol.TRANSCRIPT_SPLIT, spec.kind, matrix.representation, seed, (fold,), None, top_k
    )


def run_subject_cv(
    matrix: FeatureMatrix,
    spec: ModelSpec | None = None,
    folds: int = 5,
    seed: int = 42,
    top_k: int = 20,
    threads: int = 1,
) -> ExperimentResult:
    """Subject-grouped k-fold cross-validation.

    Folds run in a thread pool; results are collected in fold order, so the
    aggregate does not depend on ``threads``.

    Raises:
        MissingSubjectIds: If a row has no subject id.
        LeakageError: If a plan puts a subject on both sides.
    """
    spec = spec or ModelSpec()
    subject_ids = matrix.subject_ids()
    plans = group_kfold(subject_ids, folds)
    for plan in plans:
        assert_group_disjoint(plan, subject_ids)
    X = matrix.to_array()

    def run(plan: SplitPlan) -> FoldResult:
        return evaluate_plan(matrix, plan, spec, X)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = tuple(pool.map(run, plans))
    else:
        results = tuple(run(plan) for plan in plans)

    aggregate = aggregate_folds(
        [r.metrics for r in results], [r.importance for r in results], top_k
    )
    return ExperimentResult(
        Protocol.SUBJECT_CV, spec.kind, matrix.representation, seed, results, aggregate, top_k
    )


def run_experiment(matrix: FeatureMatrix, config: RunConfig) -> ExperimentResult:
    """Dispatch on ``config.protocol``."""
    spec = ModelSpec.from_run_config(config)
    if config.protocol is Protocol.SUBJECT_CV:
        return run_subject_cv(
            matrix, spec, config.folds, config.seed, config.top_k, config.threads
        )
    return run_transcript_split(matrix, spec, config.test_fraction, config.seed, config.top_k)
