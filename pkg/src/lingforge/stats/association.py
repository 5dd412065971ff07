"""Feature-by-feature group comparison with FDR control."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from lingforge.errors import ConfigError, EmptyGroup, InsufficientData
from lingforge.io.persistence import write_csv
from lingforge.models.enums import Label, StatsLevel
from lingforge.models.features import FeatureMatrix, FeatureValue
from lingforge.models.results import AssociationResult
from lingforge.stats.nonparametric import (
    GroupedSamples,
    benjamini_hochberg,
    cliffs_delta,
    mann_whitney_u,
    mwu_method,
)

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["feature", "mean_control", "mean_dementia", "cliffs_delta", "p_value", "p_adj"]
PLOT_COLUMNS = ["feature_name", "delta", "delta_normalized"]
SUBJECT_AGGREGATES = ("mean", "median")


def subject_rows(
    matrix: FeatureMatrix, aggregate: str = "mean"
) -> list[tuple[Label, list[FeatureValue]]]:
    """Collapse transcripts to one row per subject.

    Each feature becomes the mean (or median) of the subject's non-MISSING
    values, MISSING if it has none.

    Raises:
        InsufficientData: If a subject carries both labels.
    """
    if aggregate not in SUBJECT_AGGREGATES:
        raise ConfigError(f"subject_aggregate must be one of {SUBJECT_AGGREGATES}")
    grouped: dict[str, list[int]] = defaultdict(list)
    for i, row in enumerate(matrix.rows):
        grouped[row.transcript_ref.subject_id].append(i)

    X = matrix.to_array()
    reduce = np.mean if aggregate == "mean" else np.median
    out = []
    for subject in sorted(grouped):
        indices = grouped[subject]
        labels = {matrix.rows[i].transcript_ref.label for i in indices}
        if len(labels) > 1:
            raise InsufficientData(f"Subject '{subject}' has transcripts in both groups")
        values: list[FeatureValue] = []
        for j in range(X.shape[1]):
            column = X[indices, j]
            present = column[~np.isnan(column)]
            values.append(float(reduce(present)) if present.size else None)
        out.append((labels.pop(), values))
    return out


_Tested = tuple[GroupedSamples, float, float, float]


def _compare(
    name: str, control: list[FeatureValue], dementia: list[FeatureValue]
) -> _Tested | None:
    try:
        samples = GroupedSamples.from_values(name, control, dementia)
    except EmptyGroup as e:
        logger.warning("Skipping feature in association table: %s", e)
        return None
    u, p = mann_whitney_u(samples)
    return samples, u, p, cliffs_delta(samples)


def association_table(
    matrix: FeatureMatrix,
    level: StatsLevel = StatsLevel.TRANSCRIPT,
    subject_aggregate: str = "mean",
    threads: int = 1,
) -> list[AssociationResult]:
    """Mann-Whitney U, Cliff's delta and BH-adjusted p for every feature.

    Features with an empty group after removing MISSING values are skipped.
    BH runs across all tested features. Rows are sorted by ``|delta|``
    descending, then p-value, then name.

    Raises:
        InsufficientData: If either label is absent.
    """
    if level is StatsLevel.SUBJECT:
        rows = subject_rows(matrix, subject_aggregate)
    else:
        rows = [(r.transcript_ref.label, list(r.values)) for r in matrix.rows]

    counts = {label: sum(1 for lab, _ in rows if lab is label) for label in Label}
    empty = [str(label) for label, c in counts.items() if c == 0]
    if empty:
        raise InsufficientData(f"No {level} rows labelled {', '.join(empty)}")

    names = matrix.feature_names

    def compare(j: int) -> _Tested | None:
        control = [v[j] for lab, v in rows if lab is Label.CONTROL]
        dementia = [v[j] for lab, v in rows if lab is Label.DEMENTIA]
        return _compare(names[j], control, dementia)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            tested = list(pool.map(compare, range(len(names))))
    else:
        tested = [compare(j) for j in range(len(names))]
    kept = [t for t in tested if t is not None]
    if not kept:
        raise InsufficientData("No feature has values in both groups")

    adjusted = benjamini_hochberg([p for _, _, p, _ in kept])
    results = [
        AssociationResult(
            feature_name=samples.feature_name,
            mean_control=math.fsum(samples.control_values) / samples.m,
            mean_dementia=math.fsum(samples.dementia_values) / samples.n,
            cliffs_delta=delta,
            u_statistic=u,
            p_value=p,
            p_adjusted=q,
            n_control=samples.m,
            n_dementia=samples.n,
            excluded=samples.excluded,
            method=mwu_method(samples),
        )
        for (samples, u, p, delta), q in zip(kept, adjusted, strict=True)
    ]
    results.sort(key=lambda r: (-abs(r.cliffs_delta), r.p_value, r.feature_name))
    logger.info(
        "Association table (%s level): %d features, %d with p_adj < 0.05",
        level,
        len(results),
        sum(1 for r in results if r.p_adjusted < 0.05),
    )
    return results


def plot_rows(results: Sequence[AssociationResult]) -> list[list[object]]:
    """``(feature_name, delta, delta / max|delta|)`` rows; 0 when every delta is 0."""
    largest = max((abs(r.cliffs_delta) for r in results), default=0.0)
    return [
        [r.feature_name, r.cliffs_delta, r.cliffs_delta / largest if largest > 0 else 0.0]
        for r in results
    ]


def write_association_table(results: Sequence[AssociationResult], filepath: str | Path) -> None:
    rows: list[list[object]] = [
        [r.feature_name, r.mean_control, r.mean_dementia, r.cliffs_delta, r.p_value, r.p_adjusted]
        for r in results
    ]
    write_csv(filepath, TABLE_COLUMNS, rows)


def write_plot_data(results: Sequence[AssociationResult], filepath: str | Path) -> None:
    write_csv(filepath, PLOT_COLUMNS, plot_rows(results))
