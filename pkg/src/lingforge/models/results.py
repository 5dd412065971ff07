"""Result models for evaluation, importance and statistics.

All result classes serialize to plain dicts (``to_dict``/``from_dict``) so the
pipeline can persist them as JSON and rebuild them for reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from lingforge.models.enums import EffectMagnitude, Label, ModelKind, SplitKind

METRIC_NAMES: tuple[str, ...] = (
    "accuracy",
    "macro_precision",
    "macro_recall",
    "macro_f1",
    "precision_control",
    "recall_control",
    "f1_control",
    "precision_dementia",
    "recall_dementia",
    "f1_dementia",
)
"""Scalar metrics aggregated across folds, in report order."""


@dataclass(frozen=True)
class SplitPlan:
    """Train/test row assignment.

    Attributes:
        train_indices: Sorted training row indices.
        test_indices: Sorted test row indices, disjoint from training.
        kind: Stratified transcript split or subject-grouped fold.
        seed: Shuffle seed, None for deterministic grouped folds.
        fold_id: 0-based fold number for grouped folds.
    """

    train_indices: tuple[int, ...]
    test_indices: tuple[int, ...]
    kind: SplitKind
    seed: int | None = None
    fold_id: int | None = None

    def __post_init__(self) -> None:
        overlap = set(self.train_indices) & set(self.test_indices)
        if overlap:
            raise ValueError(f"SplitPlan train and test overlap on rows {sorted(overlap)[:10]}")

    @property
    def n_rows(self) -> int:
        return len(self.train_indices) + len(self.test_indices)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "seed": self.seed,
            "fold_id": self.fold_id,
            "n_train": len(self.train_indices),
            "n_test": len(self.test_indices),
        }


@dataclass(frozen=True)
class EvalMetrics:
    """Binary classification metrics on one test set.

    Per-class tuples are indexed by class code (0 control, 1 dementia).
    ``confusion[t][p]`` counts rows with true class ``t`` predicted as ``p``.
    """

    accuracy: float
    precision: tuple[float, float]
    recall: tuple[float, float]
    f1: tuple[float, float]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    confusion: tuple[tuple[int, int], tuple[int, int]]

    @property
    def n(self) -> int:
        return sum(sum(row) for row in self.confusion)

    def metric(self, name: str) -> float:
        """Scalar metric by name (see :data:`METRIC_NAMES`)."""
        if name in ("accuracy", "macro_precision", "macro_recall", "macro_f1"):
            return float(getattr(self, name))
        kind, _, label = name.rpartition("_")
        values = {"precision": self.precision, "recall": self.recall, "f1": self.f1}.get(kind)
        if values is None or label not in ("control", "dementia"):
            raise KeyError(name)
        return values[Label.from_name(label).code]

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {name: self.metric(name) for name in METRIC_NAMES}
        data["confusion"] = [list(row) for row in self.confusion]
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EvalMetrics:
        confusion = data["confusion"]
        return cls(
            accuracy=data["accuracy"],
            precision=(data["precision_control"], data["precision_dementia"]),
            recall=(data["recall_control"], data["recall_dementia"]),
            f1=(data["f1_control"], data["f1_dementia"]),
            macro_precision=data["macro_precision"],
            macro_recall=data["macro_recall"],
            macro_f1=data["macro_f1"],
            confusion=(
                (int(confusion[0][0]), int(confusion[0][1])),
                (int(confusion[1][0]), int(confusion[1][1])),
            ),
        )


@dataclass(frozen=True)
class ImportanceEntry:
    """One feature's global importance.

    ``sign`` is +1/-1/0 for signed scores (logistic coefficients) and None for
    MDI scores.
    """

    feature: str
    score: float
    sign: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"feature": self.feature, "score": self.score, "sign": self.sign}


@dataclass(frozen=True)
class ImportanceReport:
    """Ranked global feature importance of one fitted model.

    Entries are sorted by ``|score|`` descending, ties by feature name.
    """

    model_kind: ModelKind
    entries: tuple[ImportanceEntry, ...]
    top_k: int | None = 20

    def features(self) -> list[str]:
        return [e.feature for e in self.entries]

    def scores(self) -> dict[str, float]:
        return {e.feature: e.score for e in self.entries}

    def to_dict(self) -> dict[str, Any]:
        return {
            "model_kind": self.model_kind.value,
            "top_k": self.top_k,
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ImportanceReport:
        return cls(
            model_kind=ModelKind(data["model_kind"]),
            entries=tuple(
                ImportanceEntry(e["feature"], float(e["score"]), e.get("sign"))
                for e in data["entries"]
            ),
            top_k=data.get("top_k"),
        )


@dataclass(frozen=True)
class ImportanceSummary:
    """Fold-aggregated importance of one feature."""

    feature: str
    mean: float
    std: float
    n_folds_present: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature,
            "mean": self.mean,
            "std": self.std,
            "n_folds_present": self.n_folds_present,
        }


@dataclass(frozen=True)
class FoldAggregate:
    """Metrics and importances aggregated over cross-validation folds.

    Attributes:
        fold_metrics: Per-fold metrics in fold order.
        metric_mean: Mean of each scalar metric over folds.
        metric_std: Sample (n-1) standard deviation over folds.
        fold_importances: Per-fold importance reports (may be empty).
        importance: Aggregated importance, sorted by ``|mean|`` and truncated.
    """

    fold_metrics: tuple[EvalMetrics, ...]
    metric_mean: dict[str, float]
    metric_std: dict[str, float]
    fold_importances: tuple[ImportanceReport, ...] = field(default_factory=tuple)
    importance: tuple[ImportanceSummary, ...] = field(default_factory=tuple)

    @property
    def n_folds(self) -> int:
        return len(self.fold_metrics)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_folds": self.n_folds,
            "metric_mean": dict(self.metric_mean),
            "metric_std": dict(self.metric_std),
            "folds": [m.to_dict() for m in self.fold_metrics],
            "fold_importances": [r.to_dict() for r in self.fold_importances],
            "importance": [s.to_dict() for s in self.importance],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FoldAggregate:
        return cls(
            fold_metrics=tuple(EvalMetrics.from_dict(m) for m in data["folds"]),
            metric_mean={k: float(v) for k, v in data["metric_mean"].items()},
            metric_std={k: float(v) for k, v in data["metric_std"].items()},
            fold_importances=tuple(
                ImportanceReport.from_dict(r) for r in data.get("fold_importances", [])
            ),
            importance=tuple(
                ImportanceSummary(s["feature"], s["mean"], s["std"], s["n_folds_present"])
                for s in data.get("importance", [])
            ),
        )


@dataclass(frozen=True)
class AssociationResult:
    """Group comparison of one feature.

    ``cliffs_delta`` is positive when values tend to be higher in control.
    """

    feature_name: str
    mean_control: float
    mean_dementia: float
    cliffs_delta: float
    u_statistic: float
    p_value: float
    p_adjusted: float
    n_control: int = 0
    n_dementia: int = 0
    excluded: int = 0
    method: str = "asymptotic"

    def __post_init__(self) -> None:
        if not -1.0 <= self.cliffs_delta <= 1.0:
            raise ValueError(f"{self.feature_name}: Cliff's delta out of range: {self.cliffs_delta}")
        if not (0.0 <= self.p_value <= 1.0 and 0.0 <= self.p_adjusted <= 1.0):
            raise ValueError(f"{self.feature_name}: p-values must lie in [0, 1]")

    @property
    def magnitude(self) -> EffectMagnitude:
        return EffectMagnitude.from_delta(self.cliffs_delta)

    @property
    def higher_in(self) -> Label | None:
        if self.cliffs_delta > 0:
            return Label.CONTROL
        if self.cliffs_delta < 0:
            return Label.DEMENTIA
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature_name,
            "mean_control": self.mean_control,
            "mean_dementia": self.mean_dementia,
            "cliffs_delta": self.cliffs_delta,
            "u_statistic": self.u_statistic,
            "p_value": self.p_value,
            "p_adj": self.p_adjusted,
            "n_control": self.n_control,
            "n_dementia": self.n_dementia,
            "excluded": self.excluded,
            "method": self.method,
            "magnitude": self.magnitude.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AssociationResult:
        return cls(
            feature_name=data["feature"],
            mean_control=float(data["mean_control"]),
            mean_dementia=float(data["mean_dementia"]),
            cliffs_delta=float(data["cliffs_delta"]),
            u_statistic=float(data["u_statistic"]),
            p_value=float(data["p_value"]),
            p_adjusted=float(data["p_adj"]),
            n_control=int(data.get("n_control", 0)),
            n_dementia=int(data.get("n_dementia", 0)),
            excluded=int(data.get("excluded", 0)),
            method=data.get("method", "asymptotic"),
        )
