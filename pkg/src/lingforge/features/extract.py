"""Feature vectors and matrices.

Feature sets per representation:

    - RAW: num_tokens, num_types, TTR, MATTR, num_sentences, mean_sent_len,
      content_word_ratio, semantic_coherence, pos_diversity
    - POS_ENHANCED: the RAW names computed on the hybrid stream, then one
      proportion per universal tag
    - POS_ONLY: as POS_ENHANCED with TTR/MATTR over the tag stream and
      content_word_ratio/semantic_coherence MISSING
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

from lingforge.errors import EmptyStream, InsufficientData, NoWordTokens
from lingforge.features.lexical import (
    build_word_stream,
    compute_content_word_ratio,
    compute_mattr,
    compute_semantic_coherence,
    compute_ttr,
)
from lingforge.features.structural import (
    compute_pos_diversity,
    compute_pos_proportions,
    compute_structural,
)
from lingforge.models.enums import Label, Representation, UposTag
from lingforge.models.features import MISSING, FeatureMatrix, FeatureValue, FeatureVector
from lingforge.models.transcript import Transcript

logger = logging.getLogger(__name__)

BASE_FEATURES: tuple[str, ...] = (
    "num_tokens",
    "num_types",
    "TTR",
    "MATTR",
    "num_sentences",
    "mean_sent_len",
    "content_word_ratio",
    "semantic_coherence",
    "pos_diversity",
)
POS_FEATURES: tuple[str, ...] = tuple(tag.value for tag in UposTag)


def feature_names(representation: Representation) -> tuple[str, ...]:
    """Feature names emitted for a representation, before column dropping."""
    if representation is Representation.RAW:
        return BASE_FEATURES
    return BASE_FEATURES + POS_FEATURES


def extract_feature_vector(
    transcript: Transcript,
    representation: Representation,
    window: int = 50,
    include_propn: bool = True,
) -> FeatureVector:
    """Compute every feature of one tagged transcript.

    A transcript without word tokens (only terminators or PUNCT) gets MISSING
    for TTR, MATTR and content_word_ratio; the other features are defined.

    Raises:
        EmptyTranscript: If the transcript has no tokens or no sentences.
    """
    words = build_word_stream(transcript, representation, include_propn)
    structural = compute_structural(transcript, representation, include_propn)
    lexical_blind = representation is Representation.POS_ONLY

    def measured(name: str, measure: Callable[[], float]) -> FeatureValue:
        try:
            return measure()
        except (EmptyStream, NoWordTokens) as e:
            logger.warning("%s: %s is MISSING: %s", transcript.ref, name, e)
            return MISSING

    values: dict[str, FeatureValue] = {
        "num_tokens": float(structural.num_tokens),
        "num_types": float(structural.num_types),
        "TTR": measured("TTR", lambda: compute_ttr(words)),
        "MATTR": measured("MATTR", lambda: compute_mattr(words, window)),
        "num_sentences": float(structural.num_sentences),
        "mean_sent_len": structural.mean_sent_len,
        "content_word_ratio": (
            MISSING
            if lexical_blind
            else measured(
                "content_word_ratio",
                lambda: compute_content_word_ratio(transcript, include_propn),
            )
        ),
        "semantic_coherence": (
            MISSING if lexical_blind else compute_semantic_coherence(transcript, include_propn)
        ),
        "pos_diversity": compute_pos_diversity(transcript),
    }
    if representation is not Representation.RAW:
        for tag, share in compute_pos_proportions(transcript).items():
            values[tag.value] = share

    names = feature_names(representation)
    return FeatureVector(names, tuple(values[name] for name in names), transcript.ref)


def build_feature_matrix(
    transcripts: list[Transcript],
    representation: Representation,
    window: int = 50,
    include_propn: bool = True,
    threads: int = 1,
) -> FeatureMatrix:
    """Extract and assemble a feature matrix.

    Rows are ordered by (subject_id, session_id, source_path). Columns that are
    MISSING in every row are removed and listed in ``dropped_columns``;
    remaining MISSING cells stay MISSING.

    Raises:
        InsufficientData: Fewer than two transcripts, or a label is absent.
    """
    if len(transcripts) < 2:
        raise InsufficientData(f"Need at least 2 transcripts, got {len(transcripts)}")
    labels = {t.label for t in transcripts}
    if labels != set(Label):
        missing = sorted(str(label) for label in set(Label) - labels)
        raise InsufficientData(f"Corpus has no transcripts labeled {missing}")

    ordered = sorted(transcripts, key=lambda t: (t.subject_id, t.session_id, t.source_path))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(
            pool.map(
                lambda t: extract_feature_vector(t, representation, window, include_propn),
                ordered,
            )
        )

    names = rows[0].names
    keep = [i for i in range(len(names)) if any(row.values[i] is not None for row in rows)]
    dropped = tuple(name for i, name in enumerate(names) if i not in keep)
    if dropped:
        logger.warning("Dropping all-MISSING columns under %s: %s", representation, list(dropped))
        kept_names = tuple(names[i] for i in keep)
        rows = [
            FeatureVector(kept_names, tuple(row.values[i] for i in keep), row.transcript_ref)
            for row in rows
        ]
    return FeatureMatrix(tuple(rows), representation, dropped, window)
