"""Global feature importance for fitted models."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from lingforge.learn.forest import ForestModel
from lingforge.learn.logistic import LogisticModel
from lingforge.models.results import ImportanceEntry, ImportanceReport


def rank_entries(
    entries: Iterable[ImportanceEntry], top_k: int | None = None
) -> tuple[ImportanceEntry, ...]:
    """Sort by ``|score|`` descending, ties by feature name, then truncate."""
    ranked = sorted(entries, key=lambda e: (-abs(e.score), e.feature))
    return tuple(ranked if top_k is None else ranked[:top_k])


def logistic_importance(model: LogisticModel, top_k: int | None = 20) -> ImportanceReport:
    """Rank standardized coefficients by magnitude, keeping their sign.

    A positive coefficient pushes toward dementia.
    """
    entries = (
        ImportanceEntry(name, coef, int(np.sign(coef)))
        for name, coef in zip(model.feature_names, model.coefficients, strict=True)
    )
    return ImportanceReport(model.model_kind, rank_entries(entries, top_k), top_k)


def forest_mdi_importance(model: ForestModel, top_k: int | None = 20) -> ImportanceReport:
    """Rank features by normalized mean decrease in impurity."""
    scores = model.mdi()
    entries = (
        ImportanceEntry(name, float(score))
        for name, score in zip(model.feature_names, scores, strict=True)
    )
    return ImportanceReport(model.model_kind, rank_entries(entries, top_k), top_k)


def model_importance(
    model: LogisticModel | ForestModel, top_k: int | None = 20
) -> ImportanceReport:
    if isinstance(model, LogisticModel):
        return logistic_importance(model, top_k)
    return forest_mdi_importance(model, top_k)
