"""Cleaning of CHAT main tiers into typed tokens.

Turns a :class:`~lingforge.models.transcript.RawChatFile` into a
:class:`~lingforge.models.transcript.Transcript` holding only the target
speaker's utterances. Every CHAT marker class is disposed of according to the
:class:`~lingforge.models.policy.CleaningPolicy` (see the table in
:mod:`lingforge.models.policy`).

Tokenizing a main tier:
    1. media bullets are removed and utterance linkers (``+<``, ``+^`` ...) dropped
    2. the line is split into words, ``<``/``>`` scope delimiters and
       ``[...]`` bracket codes
    3. each word is classified (filler, fragment, terminator, pause, ...)
    4. ``[/]``, ``[//]`` and ``[///]`` apply to the preceding ``<...>`` group,
       or to the preceding word when there is no group

Unbalanced ``<``/``>`` delimiters are tolerated: a stray ``>`` is ignored and
an unclosed ``<`` simply opens no scope.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from lingforge.errors import NoParticipantSpeech
from lingforge.models.enums import TokenKind
from lingforge.models.policy import CleaningPolicy
from lingforge.models.transcript import RawChatFile, Token, Transcript, Utterance

if TYPE_CHECKING:
    from lingforge.corpus.identity import TranscriptIdentity

logger = logging.getLogger(__name__)

_BULLET = re.compile("\x15[^\x15]*\x15")
_LINKER = re.compile(r'(?:(?<=\s)|^)\+(?:<|\^|,|\+|")(?=\s|$)')
_SPLIT = re.compile(r"(\[[^\]]*\]|<|>)")
_PAUSE = re.compile(r"^\((\.{1,3}|\d+(\.\d+)?|\d+:\d+(\.\d+)?)\)$")
_SPECIAL_TERMINATOR = re.compile(r'^\+[./!?"]+$')
_OMITTED = re.compile(r"^0[A-Za-z]")

_TERMINATORS = {".", "?", "!"}
_UNINTELLIGIBLE = {"xxx", "yyy", "www"}
_HESITATIONS = {"uh", "um", "er", "ah", "eh", "hm", "mm", "hmm", "uhm", "em", "erm"}
_WORD_EXTRA_CHARS = "'-_+"

# %mor items with no main-tier token of their own (comma and tag markers).
_MOR_SKIP_PREFIXES = ("cm|", "beg|", "end|")
_MOR_SKIP_ITEMS = {",", "„", "‡"}

# Piece categories produced by the word classifier.
_WORD = "word"
_FILLER = "filler"
_FRAGMENT = "fragment"
_TERMINATOR = "terminator"
_PLACEHOLDER = "placeholder"
_PAUSE_MARK = "pause"

_KINDS = {
    _WORD: TokenKind.WORD,
    _FILLER: TokenKind.FILLER,
    _FRAGMENT: TokenKind.FRAGMENT,
    _TERMINATOR: TokenKind.TERMINATOR,
    _PLACEHOLDER: TokenKind.PLACEHOLDER,
}


@dataclass
class _Unit:
    """A word or a ``<...>`` group, the target of a following scope code."""

    pieces: list[tuple[str, str]] = field(default_factory=list)
    scope: str | None = None


def clean_transcript(
    raw: RawChatFile,
    policy: CleaningPolicy | None = None,
    identity: TranscriptIdentity | None = None,
) -> Transcript:
    """Keep the target speaker's utterances and clean their markers.

    Args:
        raw: Parsed CHAT file.
        policy: Marker disposition; defaults to :meth:`CleaningPolicy.default`.
        identity: Subject, session and label; resolved from ``raw.path``
            when omitted.

    Returns:
        Transcript whose utterances all belong to ``policy.target_speaker``.
        Utterances left without any non-terminator token are dropped.

    Raises:
        NoParticipantSpeech: If no target-speaker utterance survives.
        UnresolvableSubject, UnresolvableLabel: If identity must be resolved
            and cannot be.

    Example:
        >>> from lingforge.io.chat_parser import parse_chat
        >>> raw = parse_chat(b"@Begin\\n*PAR:\\t&-uh the boy xxx .\\n@End\\n",
        ...                  path="control/001-0.cha")
        >>> [t.surface for t in clean_transcript(raw).tokens()]
        ['uh', 'the', 'boy', '.']
    """
    policy = policy or CleaningPolicy()
    if identity is None:
        from lingforge.corpus.identity import resolve_identity

        identity = resolve_identity(raw, raw.path, target_speaker=policy.target_speaker)

    utterances: list[Utterance] = []
    skipped = 0
    for main, dependents in raw.main_tiers():
        if main.speaker != policy.target_speaker:
            skipped += 1
            continue
        tokens, pauses = tokenize_main_tier(main.content, policy)
        if all(t.kind is TokenKind.TERMINATOR for t in tokens):
            logger.debug("%s:%d: utterance empty after cleaning", raw.path, main.line_no)
            continue
        mor = dependents.get("%mor")
        mor_items = parse_mor_items(mor.content) if mor is not None else None
        utterances.append(
            Utterance(
                speaker=policy.target_speaker,
                tokens=tuple(tokens),
                mor_items=mor_items,
                pauses=pauses if policy.count_pauses else 0,
            )
        )

    if not utterances:
        raise NoParticipantSpeech(
            f"{raw.path}: no utterances from speaker {policy.target_speaker} after cleaning "
            f"(speakers present: {raw.speakers()})"
        )
    logger.debug(
        "Cleaned %s: kept %d %s utterances, removed %d from other speakers",
        raw.path,
        len(utterances),
        policy.target_speaker,
        skipped,
    )
    return Transcript(
        subject_id=identity.subject_id,
        session_id=identity.session_id,
        label=identity.label,
        utterances=tuple(utterances),
        source_path=identity.source_path,
    )


def tokenize_main_tier(content: str, policy: CleaningPolicy) -> tuple[list[Token], int]:
    """Tokenize one main-tier line under a policy.

    Returns:
        Tokens in spoken order and the number of pause markers seen.
    """
    text = _LINKER.sub(" ", _BULLET.sub(" ", content))
    units: list[_Unit] = []
    open_groups: list[int] = []
    pauses = 0

    for part in _SPLIT.split(text):
        if not part or part.isspace():
            continue
        if part == "<":
            open_groups.append(len(units))
        elif part == ">":
            if open_groups:
                start = open_groups.pop()
                group = _Unit([piece for unit in units[start:] for piece in unit.pieces])
                del units[start:]
                if group.pieces:
                    units.append(group)
        elif part.startswith("["):
            code = part[1:-1].strip()
            if code in ("/", "//", "///") and units and units[-1].scope is None:
                units[-1].scope = code
        else:
            for word in part.split():
                for category, surface in classify_word(word):
                    if category == _PAUSE_MARK:
                        pauses += 1
                    else:
                        units.append(_Unit([(category, surface)]))

    tokens: list[Token] = []
    for unit in units:
        retraced = unit.scope is not None
        if unit.scope == "/" and not policy.keep_repetitions:
            continue
        if unit.scope in ("//", "///") and not policy.keep_retracings:
            continue
        for category, surface in unit.pieces:
            token = _make_token(category, surface, retraced, policy)
            if token is not None:
                tokens.append(token)
    return tokens, pauses


def classify_word(word: str) -> list[tuple[str, str]]:
    """Classify one whitespace-delimited main-tier word.

    Returns:
        Zero or more ``(category, surface)`` pieces; a word with a glued
        terminator (``stool.``) yields two. Stripped markers yield none.
    """
    if word in _TERMINATORS or _SPECIAL_TERMINATOR.match(word):
        return [(_TERMINATOR, word)]
    if _PAUSE.match(word):
        return [(_PAUSE_MARK, word)]
    if word.startswith("&"):
        return _classify_ampersand(word[1:])
    if _OMITTED.match(word):
        return []

    terminator = None
    if word[-1] in _TERMINATORS and len(word) > 1:
        terminator = word[-1]
        word = word.rstrip(".?!")
    surface = normalize_word(word)
    pieces: list[tuple[str, str]] = []
    if surface and not _OMITTED.match(surface):
        category = _PLACEHOLDER if surface.lower() in _UNINTELLIGIBLE else _WORD
        pieces.append((category, surface))
    if terminator is not None:
        pieces.append((_TERMINATOR, terminator))
    return pieces


def normalize_word(word: str) -> str:
    """Strip CHAT word-internal notation.

    Drops ``@`` form suffixes, keeps the letters of parenthesized shortenings
    (``(be)cause`` -> ``because``) and removes lengthening and prosodic
    symbols. Returns ``""`` when nothing alphanumeric is left.
    """
    word = word.split("@", 1)[0]
    surface = "".join(ch for ch in word if ch.isalnum() or ch in _WORD_EXTRA_CHARS)
    return surface if any(ch.isalnum() for ch in surface) else ""


def parse_mor_items(content: str) -> tuple[str, ...]:
    """Split a %mor tier into items, dropping comma and tag-marker items."""
    return tuple(
        item
        for item in content.split()
        if item not in _MOR_SKIP_ITEMS and not item.startswith(_MOR_SKIP_PREFIXES)
    )


def _classify_ampersand(rest: str) -> list[tuple[str, str]]:
    if not rest or rest[0] in "=*":
        return []
    if rest[0] == "-":
        category, body = _FILLER, rest[1:]
    elif rest[0] in "+~":
        category, body = _FRAGMENT, rest[1:]
    else:
        body = rest
        category = _FILLER if normalize_word(body).lower() in _HESITATIONS else _FRAGMENT
    surface = normalize_word(body)
    return [(category, surface)] if surface else []


def _make_token(
    category: str, surface: str, retraced: bool, policy: CleaningPolicy
) -> Token | None:
    if category == _FILLER and not policy.keep_fillers:
        return None
    if category == _FRAGMENT and not policy.keep_fragments:
        return None
    if category == _PLACEHOLDER and policy.drop_unintelligible:
        return None
    kind = _KINDS[category]
    return Token(surface=surface, kind=kind, retraced=retraced and kind is not TokenKind.TERMINATOR)
