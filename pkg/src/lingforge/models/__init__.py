"""Domain data models for lingforge.

Exports the transcript types produced by the CHAT reader and the cleaning
step, the feature and result types produced by the analysis modules, and the
configuration dataclasses.
"""

from lingforge.models.config import RunConfig
from lingforge.models.enums import (
    CONTENT_TAGS,
    EffectMagnitude,
    Label,
    ModelKind,
    Protocol,
    Representation,
    SplitKind,
    StatsLevel,
    Terminator,
    TokenKind,
    UposTag,
)
from lingforge.models.features import MISSING, FeatureMatrix, FeatureVector, is_missing
from lingforge.models.policy import CleaningPolicy
from lingforge.models.results import (
    METRIC_NAMES,
    AssociationResult,
    EvalMetrics,
    FoldAggregate,
    ImportanceEntry,
    ImportanceReport,
    ImportanceSummary,
    SplitPlan,
)
from lingforge.models.transcript import (
    RawChatFile,
    TierLine,
    Token,
    Transcript,
    TranscriptRef,
    Utterance,
)

__all__ = [
    # Transcript types
    "RawChatFile",
    "TierLine",
    "Token",
    "Transcript",
    "TranscriptRef",
    "Utterance",
    # Features
    "MISSING",
    "FeatureMatrix",
    "FeatureVector",
    "is_missing",
    # Results
    "METRIC_NAMES",
    "AssociationResult",
    "EvalMetrics",
    "FoldAggregate",
    "ImportanceEntry",
    "ImportanceReport",
    "ImportanceSummary",
    "SplitPlan",
    # Enums
    "CONTENT_TAGS",
    "EffectMagnitude",
    "Label",
    "ModelKind",
    "Protocol",
    "Representation",
    "SplitKind",
    "StatsLevel",
    "Terminator",
    "TokenKind",
    "UposTag",
    # Configuration
    "CleaningPolicy",
    "RunConfig",
]
