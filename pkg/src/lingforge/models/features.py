"""Feature vector and matrix models.

MISSING is represented by ``None`` in vectors and by ``NaN`` once a matrix is
turned into a numpy array. Imputation happens at model time, inside each
training fold, never here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from lingforge.models.enums import Label, Representation
from lingforge.models.transcript import TranscriptRef

MISSING = None
"""Marker for a feature that is undefined for a transcript."""

FeatureValue = float | None


def is_missing(value: FeatureValue) -> bool:
    return value is None or (isinstance(value, float) and math.isnan(value))


def _as_float(value: FeatureValue) -> float:
    return math.nan if value is None else float(value)


@dataclass(frozen=True)
class FeatureVector:
    """Named features of one transcript.

    Attributes:
        names: Ordered, unique feature names.
        values: Parallel values; ``None`` marks MISSING.
        transcript_ref: Identity of the source transcript.
    """

    names: tuple[str, ...]
    values: tuple[FeatureValue, ...]
    transcript_ref: TranscriptRef

    def __post_init__(self) -> None:
        if len(self.names) != len(self.values):
            raise ValueError(
                f"FeatureVector has {len(self.names)} names but {len(self.values)} values"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"FeatureVector names must be unique: {self.names}")

    def __getitem__(self, name: str) -> FeatureValue:
        try:
            return self.values[self.names.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def as_dict(self) -> dict[str, FeatureValue]:
        return dict(zip(self.names, self.values, strict=True))


@dataclass(frozen=True)
class FeatureMatrix:
    """Rectangular feature table over a corpus.

    Attributes:
        rows: Vectors sharing one name list, ordered by transcript identity.
        representation: Representation the features were extracted under.
        dropped_columns: Columns removed because every row was MISSING.
        mattr_window: MATTR window used during extraction.
    """

    rows: tuple[FeatureVector, ...]
    representation: Representation
    dropped_columns: tuple[str, ...] = field(default_factory=tuple)
    mattr_window: int = 50

    def __post_init__(self) -> None:
        if not self.rows:
            return
        names = self.rows[0].names
        for row in self.rows[1:]:
            if row.names != names:
                raise ValueError(
                    f"FeatureMatrix rows disagree on feature names at {row.transcript_ref}"
                )

    @property
    def feature_names(self) -> tuple[str, ...]:
        return self.rows[0].names if self.rows else ()

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.feature_names)

    def to_array(self) -> np.ndarray:
        """Float matrix with NaN for MISSING."""
        data = [[_as_float(v) for v in row.values] for row in self.rows]
        return np.asarray(data, dtype=float).reshape(len(self.rows), len(self.feature_names))

    def labels(self) -> np.ndarray:
        """Binary labels (0 control, 1 dementia)."""
        return np.asarray([row.transcript_ref.label.code for row in self.rows], dtype=int)

    def subject_ids(self) -> list[str]:
        return [row.transcript_ref.subject_id for row in self.rows]

    def column(self, name: str) -> list[FeatureValue]:
        index = self.feature_names.index(name)
        return [row.values[index] for row in self.rows]

    def label_counts(self) -> dict[Label, int]:
        counts = {label: 0 for label in Label}
        for row in self.rows:
            counts[row.transcript_ref.label] += 1
        return counts

    def to_description(self) -> str:
        counts = self.label_counts()
        dropped = ", ".join(self.dropped_columns) or "none"
        return (
            f"FeatureMatrix [{self.representation}]: {self.shape[0]} rows x {self.shape[1]} features\n"
            f"  Control: {counts[Label.CONTROL]}, Dementia: {counts[Label.DEMENTIA]}\n"
            f"  Dropped columns: {dropped}"
        )
