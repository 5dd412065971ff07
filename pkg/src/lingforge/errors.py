"""Typed errors raised across lingforge.

Every error derives from :class:`LingforgeError`, itself a ``ValueError`` so
callers that only catch ``ValueError`` (as the readers always did) keep working.
Each class carries the process exit code the CLI uses when it surfaces.

Exit codes:
    - 1: generic failure (model fitting, evaluation preconditions, strict report)
    - 2: corpus errors (unparseable CHAT, unresolvable identity, empty corpus)
    - 3: annotation quality gate (missing tags, alignment, tag files)
    - 4: leakage guard
    - 5: statistics precondition (a class is empty)
    - 64: usage / configuration
"""

from __future__ import annotations


class LingforgeError(ValueError):
    """Base class for all lingforge errors."""

    exit_code: int = 1


# =============================================================================
# CHAT parsing (exit 2)
# =============================================================================


class ChatParseError(LingforgeError):
    """A CHAT file could not be parsed.

    Attributes:
        path: File identifier the error refers to.
        line_no: 1-based line number, when the error is tied to a line.
    """

    exit_code = 2

    def __init__(self, message: str, path: str = "<memory>", line_no: int | None = None):
        location = f"{path}:{line_no}" if line_no is not None else path
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line_no = line_no


class MissingBegin(ChatParseError):
    """File does not open with an @Begin header."""


class MissingEnd(ChatParseError):
    """File does not close with an @End header."""


class MalformedTier(ChatParseError):
    """A line is neither a header, a tier, nor a continuation."""


class ChatDecodeError(ChatParseError):
    """File content is not valid UTF-8."""


# =============================================================================
# Corpus and identity (exit 2)
# =============================================================================


class CorpusError(LingforgeError):
    """Corpus-level failure."""

    exit_code = 2


class NoParticipantSpeech(CorpusError):
    """Cleaning left zero utterances from the target speaker."""


class UnresolvableSubject(CorpusError):
    """Neither an @ID code nor a ``<subject>-<session>`` filename was found."""


class UnresolvableLabel(CorpusError):
    """Neither a label directory nor a manifest entry was found."""


class EmptyCorpus(CorpusError):
    """Input directory holds no usable transcripts."""


class UnparseableFiles(CorpusError):
    """One or more corpus files failed to load.

    Attributes:
        failures: ``(path, message)`` pairs in path order.
    """

    def __init__(self, failures: list[tuple[str, str]]):
        listing = "\n".join(f"  {path}: {message}" for path, message in failures)
        super().__init__(f"{len(failures)} file(s) could not be loaded:\n{listing}")
        self.failures = failures


class ArtifactMismatch(CorpusError):
    """An upstream artifact was produced under a different configuration."""


class MalformedArtifact(CorpusError):
    """A persisted artifact (token file, matrix, manifest) cannot be read back."""


class MissingArtifact(CorpusError):
    """An upstream stage output does not exist yet."""


# =============================================================================
# POS annotation (exit 3)
# =============================================================================


class AnnotationError(LingforgeError):
    """POS annotation failure."""

    exit_code = 3


class MissingTags(AnnotationError):
    """Too few utterances carry a %mor tier and no external tags were given."""


class AlignmentFailure(AnnotationError):
    """Alignable token count differs from the %mor item count."""


class LengthMismatch(AnnotationError):
    """Two sequences that must be parallel differ in length."""


class UnknownTagName(AnnotationError):
    """A tag name is not one of the 17 universal tags."""


class QualityGateFailure(AnnotationError):
    """Share of X-tagged word tokens exceeds the configured threshold."""


# =============================================================================
# Features
# =============================================================================


class FeatureError(LingforgeError):
    """Feature extraction failure."""

    exit_code = 2


class EmptyTranscript(FeatureError):
    """Transcript has no tokens to measure."""


class EmptyStream(FeatureError):
    """Token stream is empty."""


class NoWordTokens(FeatureError):
    """Transcript has no non-PUNCT tokens."""


class InsufficientData(LingforgeError):
    """Not enough rows or labels for the requested computation."""

    exit_code = 5


# =============================================================================
# Models
# =============================================================================


class ModelError(LingforgeError):
    """Model fitting or application failure."""


class InsufficientRows(ModelError):
    """Fewer than two rows were given to a fit."""


class SingleClass(ModelError):
    """Training labels contain only one class."""


class NonFiniteLoss(ModelError):
    """Optimizer produced a non-finite loss."""


class ArityMismatch(ModelError):
    """Row width differs from the model's feature count."""


class ModelFormatError(ModelError):
    """Serialized model is malformed or of an unknown version."""


# =============================================================================
# Evaluation
# =============================================================================


class EvaluationError(LingforgeError):
    """Evaluation protocol failure."""


class ClassTooSmall(EvaluationError):
    """A class would get an empty train or test side."""


class TooFewSubjects(EvaluationError):
    """Fewer distinct subjects than requested folds."""


class TooFewFolds(EvaluationError):
    """Fold aggregation needs at least two folds."""


class LeakageError(EvaluationError):
    """A subject appears on both sides of a grouped split."""

    exit_code = 4


class MissingSubjectIds(EvaluationError):
    """Grouped evaluation requested on rows without subject ids."""

    exit_code = 4


# =============================================================================
# Statistics (exit 5)
# =============================================================================


class StatsError(LingforgeError):
    """Statistical test precondition failure."""

    exit_code = 5


class EmptyGroup(StatsError):
    """A group has no values after excluding missing ones."""


class OutOfRange(StatsError):
    """A p-value lies outside [0, 1]."""


# =============================================================================
# Pipeline
# =============================================================================


class ReportIncomplete(LingforgeError):
    """A strict report run found missing inputs."""


# =============================================================================
# Configuration (exit 64)
# =============================================================================


class ConfigError(LingforgeError):
    """Invalid configuration value or file."""

    exit_code = 64
