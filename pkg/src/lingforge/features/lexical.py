"""Token streams and lexical measures.

A token stream is the transcript rendered under a representation:

    - RAW: lowercased surfaces of every non-terminator token
    - POS_ENHANCED: content words keep their lowercased surface, every other
      token (terminators included) becomes its tag symbol
    - POS_ONLY: every token becomes its tag symbol

The word stream drops terminators and PUNCT symbols from it; counts, TTR and
MATTR are computed on the word stream.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Sequence

import numpy as np

from lingforge.errors import EmptyStream, EmptyTranscript, NoWordTokens
from lingforge.models.enums import CONTENT_TAGS, Representation, TokenKind, UposTag
from lingforge.models.features import MISSING, FeatureValue
from lingforge.models.transcript import Token, Transcript

logger = logging.getLogger(__name__)


def content_tags(include_propn: bool = True) -> frozenset[UposTag]:
    """Content-word tag set, optionally without PROPN."""
    return CONTENT_TAGS if include_propn else CONTENT_TAGS - {UposTag.PROPN}


def _symbol(token: Token, representation: Representation, content: frozenset[UposTag]) -> str:
    if representation is Representation.RAW:
        return token.surface.lower()
    if token.upos is None:
        raise ValueError(f"Token '{token.surface}' is untagged")
    if representation is Representation.POS_ENHANCED and token.upos in content:
        return token.surface.lower()
    return token.upos.value


def _is_word(token: Token) -> bool:
    return token.kind is not TokenKind.TERMINATOR and token.upos is not UposTag.PUNCT


def build_token_stream(
    transcript: Transcript,
    representation: Representation,
    include_propn: bool = True,
) -> list[str]:
    """Render a tagged transcript as a token stream.

    Raises:
        EmptyTranscript: If the transcript has no tokens.

    Example:
        POS_ENHANCED on ``the/DET boy/NOUN runs/VERB fast/ADV ./PUNCT`` gives
        ``["DET", "boy", "runs", "fast", "PUNCT"]``.
    """
    if transcript.num_tokens() == 0:
        raise EmptyTranscript(f"Transcript {transcript.ref} has no tokens")
    content = content_tags(include_propn)
    return [
        _symbol(token, representation, content)
        for token in transcript.tokens()
        if representation is not Representation.RAW or token.kind is not TokenKind.TERMINATOR
    ]


def build_word_stream(
    transcript: Transcript,
    representation: Representation,
    include_propn: bool = True,
) -> list[str]:
    """The token stream without terminators and PUNCT symbols."""
    if transcript.num_tokens() == 0:
        raise EmptyTranscript(f"Transcript {transcript.ref} has no tokens")
    content = content_tags(include_propn)
    return [
        _symbol(token, representation, content)
        for token in transcript.tokens()
        if _is_word(token)
    ]


def compute_ttr(tokens: Sequence[str]) -> float:
    """Distinct tokens divided by tokens.

    Raises:
        EmptyStream: If ``tokens`` is empty.
    """
    if not tokens:
        raise EmptyStream("TTR of an empty token stream is undefined")
    return len(set(tokens)) / len(tokens)


def compute_mattr(tokens: Sequence[str], window: int = 50) -> float:
    """Moving-average TTR over every contiguous window of length ``window``.

    Equals :func:`compute_ttr` when the stream is not longer than the window.

    Raises:
        EmptyStream: If ``tokens`` is empty.
        ValueError: If ``window`` is not positive.
    """
    if window < 1:
        raise ValueError(f"MATTR window must be positive, got {window}")
    if not tokens:
        raise EmptyStream("MATTR of an empty token stream is undefined")
    if len(tokens) <= window:
        return compute_ttr(tokens)

    counts = Counter(tokens[:window])
    total = len(counts)
    for i in range(window, len(tokens)):
        leaving, entering = tokens[i - window], tokens[i]
        counts[leaving] -= 1
        if counts[leaving] == 0:
            del counts[leaving]
        counts[entering] += 1
        total += len(counts)
    return total / (window * (len(tokens) - window + 1))


def compute_content_word_ratio(transcript: Transcript, include_propn: bool = True) -> float:
    """Content-tagged tokens over non-PUNCT tokens.

    Raises:
        NoWordTokens: If every token is PUNCT.
    """
    content = content_tags(include_propn)
    words = [t for t in transcript.tokens() if t.upos is not UposTag.PUNCT]
    if not words:
        raise NoWordTokens(f"Transcript {transcript.ref} has no non-PUNCT tokens")
    return sum(1 for t in words if t.upos in content) / len(words)


def compute_semantic_coherence(transcript: Transcript, include_propn: bool = True) -> FeatureValue:
    """Mean cosine similarity of adjacent utterances' content-word counts.

    Pairs where either utterance has no content word are skipped; with no
    usable pair the value is MISSING. A single usable pair is enough, so two
    identical utterances give 1.0; "fewer than two pairs" is read as fewer
    than two utterances contributing a pair.
    """
    content = content_tags(include_propn)
    profiles = [
        Counter(t.surface.lower() for t in u.tokens if t.upos in content)
        for u in transcript.utterances
    ]
    similarities = [
        _cosine(a, b) for a, b in zip(profiles, profiles[1:], strict=False) if a and b
    ]
    if not similarities:
        return MISSING
    return float(np.clip(np.mean(similarities), 0.0, 1.0))


def _cosine(a: Counter[str], b: Counter[str]) -> float:
    vocabulary = sorted(a.keys() | b.keys())
    va = np.array([a[w] for w in vocabulary], dtype=float)
    vb = np.array([b[w] for w in vocabulary], dtype=float)
    return float(va @ vb / (np.linalg.norm(va) * np.linalg.norm(vb)))
