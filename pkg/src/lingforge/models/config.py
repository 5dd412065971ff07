"""Run configuration for the staged pipeline.

A :class:`RunConfig` is built from defaults, then a plain-text key-value file,
then CLI flags, in that order of precedence. It is echoed into every artifact,
and a per-stage hash lets downstream stages detect artifacts produced under a
different configuration.

Config file format::

    # lingforge run
    representation = pos_only
    model = rf
    protocol = subject_cv
    seed = 7
    keep_fillers = yes

Example:
    >>> from lingforge.models.config import RunConfig
    >>> config = RunConfig.from_text("model = rf\\nfolds = 5")
    >>> config.model
    <ModelKind.FOREST: 'rf'>
"""

from __future__ import annotations

import hashlib
import json
import types
import typing
from dataclasses import dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any

from lingforge.errors import ConfigError
from lingforge.models.enums import ModelKind, Protocol, Representation, StatsLevel
from lingforge.models.policy import CleaningPolicy

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}

_POLICY_FIELDS = (
    "keep_fillers",
    "keep_repetitions",
    "keep_retracings",
    "keep_fragments",
    "drop_unintelligible",
    "count_pauses",
    "target_speaker",
)

# Fields hashed per stage; each stage also hashes every upstream stage.
_STAGE_FIELDS: dict[str, tuple[str, ...]] = {
    "ingest": _POLICY_FIELDS,
    "features": (
        "representation",
        "mattr_window",
        "include_propn",
        "tag_dir",
        "quality_gate_x_rate",
        "min_mor_coverage",
    ),
    "experiment": (
        "model",
        "l2_strength",
        "max_iter",
        "tol",
        "n_trees",
        "min_leaf",
        "max_depth",
        "protocol",
        "test_fraction",
        "folds",
        "seed",
        "top_k",
    ),
    "stats": ("stats_level", "subject_aggregate"),
}
_STAGE_PARENTS: dict[str, tuple[str, ...]] = {
    "ingest": (),
    "features": ("ingest",),
    "experiment": ("ingest", "features"),
    "stats": ("ingest", "features"),
}


@dataclass(frozen=True)
class RunConfig:
    """Complete configuration of a pipeline run.

    Attributes:
        input_dir: Root of the ``.cha`` corpus (ingest only).
        label_manifest: Optional CSV of ``key,label`` overrides.
        out_dir: Directory receiving every artifact.
        keep_fillers ... target_speaker: Cleaning policy toggles.
        tag_dir: Directory of external ``.tags`` files replacing %mor.
        representation: Feature representation.
        mattr_window: MATTR window length.
        include_propn: Count PROPN as a content word.
        quality_gate_x_rate: Maximum share of X-tagged word tokens.
        min_mor_coverage: Minimum share of utterances carrying %mor.
        model: Classifier family.
        l2_strength, max_iter, tol: Logistic regression settings.
        n_trees, min_leaf, max_depth: Random forest settings.
        protocol: Evaluation protocol.
        test_fraction: Test share for the transcript split.
        folds: Fold count for subject cross-validation.
        seed: Master seed for splits and forests.
        top_k: Rows kept in importance tables.
        stats_level: Unit of observation for association tests.
        subject_aggregate: ``mean`` or ``median`` per-subject aggregation.
        alpha: Significance level used by reports.
        threads: Worker threads for parallel stages.
        strict: Turn warnings (report gaps, alignment failures) into errors.
        skip_bad: Skip unparseable files during ingest.
    """

    input_dir: str | None = None
    label_manifest: str | None = None
    out_dir: str = "lingforge-out"

    # Cleaning
    keep_fillers: bool = True
    keep_repetitions: bool = True
    keep_retracings: bool = True
    keep_fragments: bool = True
    drop_unintelligible: bool = True
    count_pauses: bool = True
    target_speaker: str = "PAR"

    # Annotation and features
    tag_dir: str | None = None
    representation: Representation = Representation.POS_ENHANCED
    mattr_window: int = 50
    include_propn: bool = True
    quality_gate_x_rate: float = 0.02
    min_mor_coverage: float = 0.9

    # Models
    model: ModelKind = ModelKind.LOGISTIC
    l2_strength: float = 1.0
    max_iter: int = 1000
    tol: float = 1e-6
    n_trees: int = 200
    min_leaf: int = 1
    max_depth: int | None = None

    # Evaluation
    protocol: Protocol = Protocol.TRANSCRIPT_SPLIT
    test_fraction: float = 0.2
    folds: int = 5
    seed: int = 42
    top_k: int = 20

    # Statistics
    stats_level: StatsLevel = StatsLevel.TRANSCRIPT
    subject_aggregate: str = "mean"
    alpha: float = 0.05

    # Execution
    threads: int = 1
    strict: bool = False
    skip_bad: bool = False

    def __post_init__(self) -> None:
        self._validate()

    def _validate(self) -> None:
        """Validate values.

        Raises:
            ConfigError: If any value is out of range.
        """
        if self.mattr_window < 1:
            raise ConfigError(f"mattr_window must be positive, got {self.mattr_window}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError(f"test_fraction must lie in (0, 1), got {self.test_fraction}")
        if self.folds < 2:
            raise ConfigError(f"folds must be at least 2, got {self.folds}")
        if self.l2_strength <= 0:
            raise ConfigError(f"l2_strength must be positive, got {self.l2_strength}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be positive, got {self.max_iter}")
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.n_trees < 1:
            raise ConfigError(f"n_trees must be positive, got {self.n_trees}")
        if self.min_leaf < 1:
            raise ConfigError(f"min_leaf must be positive, got {self.min_leaf}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigError(f"max_depth must be positive or none, got {self.max_depth}")
        if self.top_k < 1:
            raise ConfigError(f"top_k must be positive, got {self.top_k}")
        if not 0.0 <= self.quality_gate_x_rate <= 1.0:
            raise ConfigError(
                f"quality_gate_x_rate must lie in [0, 1], got {self.quality_gate_x_rate}"
            )
        if not 0.0 < self.min_mor_coverage <= 1.0:
            raise ConfigError(f"min_mor_coverage must lie in (0, 1], got {self.min_mor_coverage}")
        if self.subject_aggregate not in ("mean", "median"):
            raise ConfigError(
                f"subject_aggregate must be 'mean' or 'median', got {self.subject_aggregate!r}"
            )
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.threads < 1:
            raise ConfigError(f"threads must be positive, got {self.threads}")
        try:
            _ = self.cleaning_policy
        except ValueError as e:
            raise ConfigError(str(e)) from None

    # =========================================================================
    # Derived views
    # =========================================================================

    @property
    def cleaning_policy(self) -> CleaningPolicy:
        return CleaningPolicy(**{name: getattr(self, name) for name in _POLICY_FIELDS})

    @property
    def out_path(self) -> Path:
        return Path(self.out_dir)

    def stage_hash(self, stage: str) -> str:
        """Hash of every setting that influences ``stage`` and its upstream stages.

        Raises:
            KeyError: If ``stage`` is not a pipeline stage.
        """
        names: list[str] = []
        for parent in (*_STAGE_PARENTS[stage], stage):
            names.extend(_STAGE_FIELDS[parent])
        data = self.to_dict()
        payload = json.dumps({name: data[name] for name in names}, sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    # =========================================================================
    # Construction
    # =========================================================================

    @classmethod
    def from_text(cls, text: str, source: str = "<config>") -> RunConfig:
        """Parse the key-value config format.

        Raises:
            ConfigError: On malformed lines, unknown keys or bad values.
        """
        values: dict[str, str] = {}
        for line_no, raw_line in enumerate(text.splitlines(), start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                key, sep, value = line.partition(":")
            if not sep:
                raise ConfigError(f"{source}:{line_no}: expected 'key = value', got {raw_line!r}")
            values[key.strip()] = value.strip()
        return cls.from_dict(values)

    @classmethod
    def from_file(cls, path: str | Path) -> RunConfig:
        """Load a config file.

        Raises:
            ConfigError: If the file is missing or invalid.
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")
        return cls.from_text(path.read_text(encoding="utf-8"), source=str(path))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunConfig:
        """Build from a dict whose values may be strings (coerced by field type)."""
        hints = typing.get_type_hints(cls)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown config keys: {unknown}")
        kwargs = {key: _coerce(key, value, hints[key]) for key, value in data.items()}
        return cls(**kwargs)

    def with_overrides(self, **overrides: Any) -> RunConfig:
        """Copy with non-None overrides applied (CLI flags)."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return self
        hints = typing.get_type_hints(type(self))
        return replace(self, **{k: _coerce(k, v, hints[k]) for k, v in updates.items()})

    # =========================================================================
    # Serialization
    # =========================================================================

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            data[f.name] = value.value if isinstance(value, Enum) else value
        return data

    def to_description(self) -> str:
        return f"""Run Configuration:
  Corpus: {self.input_dir or "-"} -> {self.out_dir}
  Representation: {self.representation} (MATTR window {self.mattr_window})
  Model: {self.model} (lambda={self.l2_strength}, trees={self.n_trees})
  Protocol: {self.protocol} (test_fraction={self.test_fraction}, folds={self.folds}, seed={self.seed})
  Statistics: {self.stats_level} level, subject aggregate {self.subject_aggregate}
  Threads: {self.threads}"""


def _coerce(name: str, value: Any, hint: Any) -> Any:
    """Coerce a raw (usually string) value to the annotated field type."""
    optional = False
    if isinstance(hint, types.UnionType) or typing.get_origin(hint) is typing.Union:
        args = [a for a in typing.get_args(hint) if a is not type(None)]
        optional = len(args) < len(typing.get_args(hint))
        hint = args[0]
    if isinstance(value, str):
        text = value.strip()
        if optional and text.lower() in ("", "none", "null"):
            return None
    elif value is None:
        if optional:
            return None
        raise ConfigError(f"{name} must not be empty")
    else:
        text = None
    try:
        if hint is bool:
            if text is None:
                return bool(value)
            lowered = text.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise ConfigError(f"{name} expects a boolean, got {value!r}")
        if isinstance(hint, type) and issubclass(hint, Enum):
            if isinstance(value, hint):
                return value
            return hint.from_name(str(value))  # type: ignore[attr-defined]
        if hint is int:
            if isinstance(value, bool):
                raise ConfigError(f"{name} expects an integer, got {value!r}")
            return int(text if text is not None else value)
        if hint is float:
            return float(text if text is not None else value)
        return text if text is not None else str(value)
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Invalid value for {name}: {value!r}") from None
