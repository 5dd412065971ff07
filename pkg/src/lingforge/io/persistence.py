"""Artifact persistence for the staged pipeline.

All writes are atomic (temporary file in the target directory, then
``os.replace``). JSON is written with sorted keys and ``repr`` floats, and CSV
cells use ``repr`` for floats, so identical inputs give byte-identical files.

Artifacts:
    - feature matrix: ``<repr>.csv`` + ``<repr>.meta.json`` sidecar
    - fitted models: ``<name>.json`` with a ``format_version`` field
    - stage results: plain JSON documents carrying a ``config_hash``
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from lingforge.errors import ArtifactMismatch, MalformedArtifact, ModelFormatError
from lingforge.models.enums import Label, ModelKind, Representation
from lingforge.models.features import FeatureMatrix, FeatureVector, is_missing
from lingforge.models.transcript import TranscriptRef

if TYPE_CHECKING:
    from lingforge.learn.forest import ForestModel
    from lingforge.learn.logistic import LogisticModel

logger = logging.getLogger(__name__)

MATRIX_FORMAT = "lingforge-features/1"
ID_COLUMNS = ("subject_id", "session_id", "label")


# =============================================================================
# Low-level writers
# =============================================================================


def atomic_write_text(filepath: str | Path, text: str) -> None:
    """Write text so readers never observe a partially written file."""
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def dumps_json(data: Any) -> str:
    """Deterministic JSON text; NaN and infinities become null."""
    return json.dumps(_json_safe(data), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(filepath: str | Path, data: Any) -> None:
    atomic_write_text(filepath, dumps_json(data))


def read_json(filepath: str | Path) -> Any:
    """Read a JSON artifact.

    Raises:
        FileNotFoundError: If the file does not exist.
        MalformedArtifact: If the content is not valid JSON.
    """
    path = Path(filepath)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise MalformedArtifact(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def format_cell(value: Any) -> str:
    """CSV cell text: empty for MISSING, ``repr`` for floats."""
    if value is None:
        return ""
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def write_csv(filepath: str | Path, header: list[str], rows: list[list[Any]]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    atomic_write_text(filepath, buffer.getvalue())


def _json_safe(value: Any) -> Any:
    if isinstance(value, float):
        return None if not math.isfinite(value) else value
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.generic):
        return _json_safe(value.item())
    return value


# =============================================================================
# Stage hashes
# =============================================================================


def check_stage_hash(meta: dict[str, Any], key: str, expected: str, what: str) -> None:
    """Compare a stored stage hash with the current configuration's.

    Raises:
        ArtifactMismatch: If the artifact was produced under different settings.
    """
    stored = meta.get(key)
    if stored != expected:
        raise ArtifactMismatch(
            f"{what} was produced under a different configuration "
            f"({key} {stored!r} != {expected!r}); rerun the upstream stage"
        )


# =============================================================================
# Feature matrices
# =============================================================================


def matrix_paths(directory: str | Path, representation: Representation) -> tuple[Path, Path]:
    base = Path(directory) / representation.value
    return base.with_suffix(".csv"), base.with_suffix(".meta.json")


def write_feature_matrix(
    matrix: FeatureMatrix,
    directory: str | Path,
    meta: dict[str, Any] | None = None,
) -> tuple[Path, Path]:
    """Write a feature matrix as CSV plus a sidecar metadata record.

    Args:
        matrix: Matrix to persist.
        directory: Target directory; files are named after the representation.
        meta: Extra sidecar fields (config hash, config echo, extraction policy).

    Returns:
        Paths of the CSV table and the sidecar.
    """
    csv_path, meta_path = matrix_paths(directory, matrix.representation)
    header = [*ID_COLUMNS, *matrix.feature_names]
    rows = [
        [row.transcript_ref.subject_id, row.transcript_ref.session_id, str(row.transcript_ref.label)]
        + [None if is_missing(v) else v for v in row.values]
        for row in matrix.rows
    ]
    write_csv(csv_path, header, rows)

    sidecar = {
        "format": MATRIX_FORMAT,
        "representation": matrix.representation.value,
        "mattr_window": matrix.mattr_window,
        "dropped_columns": list(matrix.dropped_columns),
        "feature_names": list(matrix.feature_names),
        "n_rows": len(matrix.rows),
        **(meta or {}),
    }
    write_json(meta_path, sidecar)
    logger.info("Wrote %s (%d x %d)", csv_path, *matrix.shape)
    return csv_path, meta_path


def read_feature_matrix(
    directory: str | Path, representation: Representation
) -> tuple[FeatureMatrix, dict[str, Any]]:
    """Read a matrix written by :func:`write_feature_matrix`.

    Raises:
        FileNotFoundError: If the table or sidecar is missing.
        MalformedArtifact: If either file is inconsistent.
    """
    csv_path, meta_path = matrix_paths(directory, representation)
    meta = read_json(meta_path)
    if not isinstance(meta, dict) or meta.get("format") != MATRIX_FORMAT:
        raise MalformedArtifact(f"{meta_path}: not a lingforge feature sidecar")
    if not csv_path.exists():
        raise FileNotFoundError(f"File not found: {csv_path}")

    reader = csv.reader(io.StringIO(csv_path.read_text(encoding="utf-8")))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedArtifact(f"{csv_path}: empty feature table") from None
    if tuple(header[: len(ID_COLUMNS)]) != ID_COLUMNS:
        raise MalformedArtifact(f"{csv_path}: header must start with {list(ID_COLUMNS)}")
    names = tuple(header[len(ID_COLUMNS) :])

    rows = []
    for line_no, record in enumerate(reader, start=2):
        if len(record) != len(header):
            raise MalformedArtifact(
                f"{csv_path}:{line_no}: expected {len(header)} cells, got {len(record)}"
            )
        try:
            ref = TranscriptRef(record[0], int(record[1]), Label.from_name(record[2]))
            values = tuple(float(cell) if cell else None for cell in record[len(ID_COLUMNS) :])
        except ValueError as e:
            raise MalformedArtifact(f"{csv_path}:{line_no}: {e}") from None
        rows.append(FeatureVector(names, values, ref))

    matrix = FeatureMatrix(
        rows=tuple(rows),
        representation=Representation.from_name(meta["representation"]),
        dropped_columns=tuple(meta.get("dropped_columns", ())),
        mattr_window=int(meta.get("mattr_window", 50)),
    )
    return matrix, meta


# =============================================================================
# Models
# =============================================================================


def write_model(model: LogisticModel | ForestModel, filepath: str | Path) -> None:
    write_json(filepath, model.to_dict())


def read_model(filepath: str | Path) -> LogisticModel | ForestModel:
    """Load a fitted model, dispatching on its ``model_kind`` field.

    Raises:
        ModelFormatError: If the document is not a known model format.
    """
    from lingforge.learn.forest import ForestModel
    from lingforge.learn.logistic import LogisticModel

    data = read_json(filepath)
    if not isinstance(data, dict) or "model_kind" not in data:
        raise ModelFormatError(f"{filepath}: missing 'model_kind'")
    kind = ModelKind.from_name(str(data["model_kind"]))
    if kind is ModelKind.LOGISTIC:
        return LogisticModel.from_dict(data)
    return ForestModel.from_dict(data)
