"""Linguistic feature extraction under three representations."""

from lingforge.features.extract import (
    BASE_FEATURES,
    POS_FEATURES,
    build_feature_matrix,
    extract_feature_vector,
    feature_names,
)
from lingforge.features.lexical import (
    build_token_stream,
    build_word_stream,
    compute_content_word_ratio,
    compute_mattr,
    compute_semantic_coherence,
    compute_ttr,
)
from lingforge.features.structural import (
    StructuralFeatures,
    compute_pos_diversity,
    compute_pos_proportions,
    compute_structural,
)

__all__ = [
    "BASE_FEATURES",
    "POS_FEATURES",
    "StructuralFeatures",
    "build_feature_matrix",
    "build_token_stream",
    "build_word_stream",
    "compute_content_word_ratio",
    "compute_mattr",
    "compute_pos_diversity",
    "compute_pos_proportions",
    "compute_semantic_coherence",
    "compute_structural",
    "compute_ttr",
    "extract_feature_vector",
    "feature_names",
]
