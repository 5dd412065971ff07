"""Cross-checks between model explanations and the association table."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from lingforge.models.results import AssociationResult, ImportanceEntry


@dataclass(frozen=True)
class RankingOverlap:
    """Shared features between two top-k rankings."""

    k: int
    shared: tuple[str, ...]
    only_a: tuple[str, ...]
    only_b: tuple[str, ...]

    @property
    def jaccard(self) -> float:
        union = len(self.shared) + len(self.only_a) + len(self.only_b)
        return len(self.shared) / union if union else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "shared": list(self.shared),
            "only_a": list(self.only_a),
            "only_b": list(self.only_b),
            "jaccard": self.jaccard,
        }


def ranking_overlap(
    ranking_a: Sequence[str], ranking_b: Sequence[str], k: int = 20
) -> RankingOverlap:
    """Compare the first ``k`` names of two rankings.

    ``shared`` keeps ranking A's order.
    """
    top_a = list(ranking_a[:k])
    top_b = list(ranking_b[:k])
    set_a, set_b = set(top_a), set(top_b)
    return RankingOverlap(
        k=k,
        shared=tuple(f for f in top_a if f in set_b),
        only_a=tuple(f for f in top_a if f not in set_b),
        only_b=tuple(f for f in top_b if f not in set_a),
    )


@dataclass(frozen=True)
class ConsistencyRow:
    """One important feature checked against its group comparison.

    ``direction_agrees`` is None for unsigned importances or when the
    feature was not tested.
    """

    feature: str
    importance: float
    cliffs_delta: float | None
    p_adjusted: float | None
    significant: bool
    direction_agrees: bool | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature,
            "importance": self.importance,
            "cliffs_delta": self.cliffs_delta,
            "p_adj": self.p_adjusted,
            "significant": self.significant,
            "direction_agrees": self.direction_agrees,
        }


def importance_consistency(
    importance: Sequence[ImportanceEntry],
    associations: Sequence[AssociationResult],
    alpha: float = 0.05,
) -> list[ConsistencyRow]:
    """Join ranked importance with association results.

    A positive logistic coefficient points toward dementia, which agrees with
    a negative Cliff's delta (values higher in the dementia group).
    """
    by_name = {r.feature_name: r for r in associations}
    rows = []
    for entry in importance:
        assoc = by_name.get(entry.feature)
        if assoc is None:
            rows.append(ConsistencyRow(entry.feature, entry.score, None, None, False, None))
            continue
        agrees: bool | None = None
        if entry.sign and assoc.cliffs_delta != 0:
            agrees = (entry.sign > 0) == (assoc.cliffs_delta < 0)
        rows.append(
            ConsistencyRow(
                feature=entry.feature,
                importance=entry.score,
                cliffs_delta=assoc.cliffs_delta,
                p_adjusted=assoc.p_adjusted,
                significant=assoc.p_adjusted < alpha,
                direction_agrees=agrees,
            )
        )
    return rows
