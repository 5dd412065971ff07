"""Two-sample rank statistics and false discovery rate adjustment.

Sign convention: sample A is the control group and sample B the dementia
group, so a positive Cliff's delta means values tend to be higher in control.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.stats import mannwhitneyu

from lingforge.errors import EmptyGroup, OutOfRange
from lingforge.models.features import FeatureValue, is_missing

EXACT_MAX_CELLS = 400
"""Largest ``m * n`` for which the exact null distribution is used."""


@dataclass(frozen=True)
class GroupedSamples:
    """Control and dementia values of one feature, MISSING already removed.

    Attributes:
        feature_name: Feature the samples belong to.
        control_values: Sample A (size m).
        dementia_values: Sample B (size n).
        excluded: MISSING values removed by :meth:`from_values`.
    """

    feature_name: str
    control_values: tuple[float, ...]
    dementia_values: tuple[float, ...]
    excluded: int = 0

    def __post_init__(self) -> None:
        if not self.control_values:
            raise EmptyGroup(f"{self.feature_name}: control group has no values")
        if not self.dementia_values:
            raise EmptyGroup(f"{self.feature_name}: dementia group has no values")

    @property
    def m(self) -> int:
        return len(self.control_values)

    @property
    def n(self) -> int:
        return len(self.dementia_values)

    @classmethod
    def from_values(
        cls,
        feature_name: str,
        control: Sequence[FeatureValue],
        dementia: Sequence[FeatureValue],
    ) -> GroupedSamples:
        """Drop MISSING values and record how many were dropped."""
        a = tuple(float(v) for v in control if v is not None and not is_missing(v))
        b = tuple(float(v) for v in dementia if v is not None and not is_missing(v))
        excluded = len(control) + len(dementia) - len(a) - len(b)
        return cls(feature_name, a, b, excluded)


class MannWhitneyResult(NamedTuple):
    u_statistic: float
    p_value: float


def mwu_method(samples: GroupedSamples) -> str:
    """``exact`` when ``m * n <= 400`` and the pooled sample has no ties."""
    pooled = np.concatenate([samples.control_values, samples.dementia_values])
    tie_free = np.unique(pooled).size == pooled.size
    return "exact" if samples.m * samples.n <= EXACT_MAX_CELLS and tie_free else "asymptotic"


def mann_whitney_u(samples: GroupedSamples, method: str | None = None) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test.

    ``U`` is the control sample's statistic, ``R_A - m(m+1)/2`` with average
    ranks for ties. The p-value comes from the exact null distribution when
    cheap and tie-free, else from the normal approximation with tie-corrected
    variance and continuity correction. When all pooled values are equal,
    ``U = m*n/2`` and ``p = 1``.

    Args:
        samples: Control and dementia values.
        method: ``exact`` or ``asymptotic`` to override :func:`mwu_method`.
    """
    if method not in (None, "exact", "asymptotic"):
        raise ValueError(f"unknown Mann-Whitney method {method!r}")
    a = np.asarray(samples.control_values)
    b = np.asarray(samples.dementia_values)
    if np.all(a == a[0]) and np.all(b == a[0]):
        return MannWhitneyResult(samples.m * samples.n / 2.0, 1.0)
    result = mannwhitneyu(
        a,
        b,
        alternative="two-sided",
        method=method or mwu_method(samples),
        use_continuity=True,
    )
    p = float(result.pvalue)
    if math.isnan(p):
        p = 1.0
    return MannWhitneyResult(float(result.statistic), min(max(p, 0.0), 1.0))


def cliffs_delta(samples: GroupedSamples) -> float:
    """Cliff's delta: ``sum(sign(a_i - b_j)) / (m * n)``.

    Counts wins and losses by binary search over the sorted dementia sample;
    the integer tallies make the result identical to the double loop.
    """
    b_sorted = np.sort(np.asarray(samples.dementia_values))
    a = np.asarray(samples.control_values)
    below = np.searchsorted(b_sorted, a, side="left")
    above = samples.n - np.searchsorted(b_sorted, a, side="right")
    net = int(below.sum()) - int(above.sum())
    return net / (samples.m * samples.n)


def benjamini_hochberg(p_values: Sequence[float]) -> list[float]:
    """Benjamini-Hochberg step-up adjustment, returned in input order.

    ``q_(i) = min_{j >= i} p_(j) * N / j``, capped at 1.

    Raises:
        OutOfRange: If a p-value is NaN or outside [0, 1].
    """
    p = np.asarray(p_values, dtype=float)
    if p.size == 0:
        return []
    bad = np.isnan(p) | (p < 0.0) | (p > 1.0)
    if bad.any():
        raise OutOfRange(f"p-values must lie in [0, 1]; got {p[bad][:5].tolist()}")
    n = p.size
    order = np.argsort(p, kind="stable")
    scaled = p[order] * n / np.arange(1, n + 1)
    stepped = np.minimum.accumulate(scaled[::-1])[::-1]
    adjusted = np.empty(n)
    adjusted[order] = np.minimum(stepped, 1.0)
    return adjusted.tolist()
