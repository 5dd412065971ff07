"""Structural and POS-distribution features."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from scipy.stats import entropy

from lingforge.errors import EmptyTranscript
from lingforge.features.lexical import build_word_stream
from lingforge.models.enums import Representation, TokenKind, UposTag
from lingforge.models.transcript import Transcript

_TAG_COUNT = len(UposTag)


@dataclass(frozen=True)
class StructuralFeatures:
    """Counts over the representation's word stream."""

    num_tokens: int
    num_types: int
    num_sentences: int
    mean_sent_len: float


def count_sentences(transcript: Transcript) -> int:
    """Terminators, plus one per utterance with words after its last terminator."""
    sentences = 0
    for utterance in transcript.utterances:
        trailing = False
        for token in utterance.tokens:
            if token.kind is TokenKind.TERMINATOR:
                sentences += 1
                trailing = False
            else:
                trailing = True
        sentences += int(trailing)
    return sentences


def compute_structural(
    transcript: Transcript,
    representation: Representation,
    include_propn: bool = True,
) -> StructuralFeatures:
    """Token, type and sentence counts.

    Raises:
        EmptyTranscript: If the transcript has no tokens.
    """
    words = build_word_stream(transcript, representation, include_propn)
    sentences = count_sentences(transcript)
    if sentences == 0:
        raise EmptyTranscript(f"Transcript {transcript.ref} has no sentences")
    return StructuralFeatures(
        num_tokens=len(words),
        num_types=len(set(words)),
        num_sentences=sentences,
        mean_sent_len=len(words) / sentences,
    )


def compute_pos_proportions(transcript: Transcript) -> dict[UposTag, float]:
    """Share of each tag among all tokens, PUNCT included, in tag order.

    Raises:
        EmptyTranscript: If the transcript has no tokens.
    """
    tags = transcript.tags()
    if not tags:
        raise EmptyTranscript(f"Transcript {transcript.ref} has no tagged tokens")
    counts = Counter(tags)
    return {tag: counts[tag] / len(tags) for tag in UposTag}


def compute_pos_diversity(transcript: Transcript) -> float:
    """Shannon entropy of the tag distribution over ``log(17)``, in [0, 1].

    Raises:
        EmptyTranscript: If the transcript has no tokens.
    """
    tags = transcript.tags()
    if not tags:
        raise EmptyTranscript(f"Transcript {transcript.ref} has no tagged tokens")
    counts = list(Counter(tags).values())
    value = float(entropy(counts)) / math.log(_TAG_COUNT)
    return min(max(value, 0.0), 1.0)
