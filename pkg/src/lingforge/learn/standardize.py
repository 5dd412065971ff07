"""Median imputation and z-scoring, fit on training rows only."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from lingforge.errors import ArityMismatch, InsufficientRows

ZERO_VARIANCE_STD = 1e-12


@dataclass(frozen=True)
class StandardizerParams:
    """Per-feature imputation and scaling parameters.

    Attributes:
        medians: Training medians used to fill MISSING (NaN) cells.
        means: Training means after imputation.
        stds: Population standard deviations after imputation.
        zero_variance: Columns whose std is below 1e-12; they map to 0.
    """

    medians: tuple[float, ...]
    means: tuple[float, ...]
    stds: tuple[float, ...]
    zero_variance: tuple[bool, ...]

    def __post_init__(self) -> None:
        n = len(self.medians)
        if not len(self.means) == len(self.stds) == len(self.zero_variance) == n:
            raise ValueError("StandardizerParams arrays must have equal length")

    @property
    def n_features(self) -> int:
        return len(self.medians)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Impute and standardize rows (1-D row or 2-D matrix) with stored params.

        Raises:
            ArityMismatch: If the row width differs from the fitted width.
        """
        data = np.asarray(X, dtype=float)
        single = data.ndim == 1
        data = np.atleast_2d(data)
        if data.shape[1] != self.n_features:
            raise ArityMismatch(
                f"Expected {self.n_features} features, got {data.shape[1]}"
            )
        medians = np.asarray(self.medians)
        filled = np.where(np.isnan(data), medians, data)
        zero = np.asarray(self.zero_variance)
        stds = np.where(zero, 1.0, np.asarray(self.stds))
        out = (filled - np.asarray(self.means)) / stds
        out[:, zero] = 0.0
        return out[0] if single else out

    def to_dict(self) -> dict[str, Any]:
        return {
            "medians": list(self.medians),
            "means": list(self.means),
            "stds": list(self.stds),
            "zero_variance": list(self.zero_variance),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> StandardizerParams:
        return cls(
            medians=tuple(float(v) for v in data["medians"]),
            means=tuple(float(v) for v in data["means"]),
            stds=tuple(float(v) for v in data["stds"]),
            zero_variance=tuple(bool(v) for v in data["zero_variance"]),
        )


def fit_standardizer(X: np.ndarray, scale: bool = True) -> StandardizerParams:
    """Fit imputation medians and, when ``scale``, means and stds.

    With ``scale=False`` only imputation is fitted (means 0, stds 1), which is
    what the forest uses.

    Raises:
        InsufficientRows: With fewer than two rows.
    """
    data = np.atleast_2d(np.asarray(X, dtype=float))
    if data.shape[0] < 2:
        raise InsufficientRows(f"Standardizer needs at least 2 rows, got {data.shape[0]}")

    medians = np.zeros(data.shape[1])
    for j in range(data.shape[1]):
        present = data[~np.isnan(data[:, j]), j]
        medians[j] = float(np.median(present)) if present.size else 0.0
    filled = np.where(np.isnan(data), medians, data)

    if not scale:
        d = data.shape[1]
        return StandardizerParams(
            tuple(medians.tolist()), (0.0,) * d, (1.0,) * d, (False,) * d
        )
    means = filled.mean(axis=0)
    stds = filled.std(axis=0)
    zero = stds < ZERO_VARIANCE_STD
    return StandardizerParams(
        medians=tuple(medians.tolist()),
        means=tuple(means.tolist()),
        stds=tuple(stds.tolist()),
        zero_variance=tuple(bool(z) for z in zero),
    )


def apply_standardizer(params: StandardizerParams, X: np.ndarray) -> np.ndarray:
    """Functional alias of :meth:`StandardizerParams.apply`."""
    return params.apply(X)
