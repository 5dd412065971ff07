"""lingforge: linguistic feature analysis of clinical CHAT transcripts.

This package provides:
- A CHAT (.cha) reader with a documented, policy-driven cleaning step
- %mor to universal POS tag mapping with a quality gate
- Lexical, structural and POS features under three representations
- Logistic regression and random forest with global importance
- Transcript-level and subject-grouped evaluation
- Mann-Whitney U, Cliff's delta and Benjamini-Hochberg group comparisons
- A staged CLI with deterministic, hash-stamped artifacts

Example:
    >>> from lingforge import ChatReader, build_feature_matrix, Representation
    >>> transcript = ChatReader().read("control/001-0.cha")
"""

from lingforge.features import build_feature_matrix, extract_feature_vector
from lingforge.io import ChatReader, parse_chat, parse_chat_file
from lingforge.models import (
    CleaningPolicy,
    FeatureMatrix,
    FeatureVector,
    Label,
    ModelKind,
    Protocol,
    Representation,
    RunConfig,
    Token,
    Transcript,
    UposTag,
    Utterance,
)

__version__ = "0.1.0"

__all__ = [
    # Version
    "__version__",
    # Transcript types
    "Token",
    "Transcript",
    "Utterance",
    "CleaningPolicy",
    # Features
    "FeatureMatrix",
    "FeatureVector",
    "build_feature_matrix",
    "extract_feature_vector",
    # Enums
    "Label",
    "ModelKind",
    "Protocol",
    "Representation",
    "UposTag",
    # Configuration
    "RunConfig",
    # I/O
    "ChatReader",
    "parse_chat",
    "parse_chat_file",
]
