"""Transcript data models.

A CHAT file moves through three shapes:

    - :class:`RawChatFile`: header and tier lines exactly as parsed
    - :class:`Transcript`: target-speaker utterances made of typed :class:`Token`
      objects, after the cleaning policy ran
    - a tagged :class:`Transcript`: the same, with a UPOS tag on every token

All classes are frozen; cleaning and annotation return new objects.

Example:
    >>> from lingforge.models.transcript import Token
    >>> from lingforge.models.enums import TokenKind
    >>> Token("uh", TokenKind.FILLER).to_chat()
    '&-uh'
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field, replace

from lingforge.models.enums import Label, Terminator, TokenKind, UposTag


@dataclass(frozen=True)
class TierLine:
    """One header or tier record of a CHAT file.

    Attributes:
        code: ``"@"``-prefixed header name (``"@ID"``), main tier code
            (``"*PAR"``) or dependent tier code (``"%mor"``).
        content: Text after the code, continuation lines merged with a space.
        line_no: 1-based line number of the first physical line.
    """

    code: str
    content: str
    line_no: int

    @property
    def is_main(self) -> bool:
        return self.code.startswith("*")

    @property
    def is_dependent(self) -> bool:
        return self.code.startswith("%")

    @property
    def speaker(self) -> str:
        """Speaker code of a main tier (``"*PAR"`` -> ``"PAR"``)."""
        return self.code[1:]


@dataclass(frozen=True)
class RawChatFile:
    """A parsed but uncleaned CHAT file.

    Attributes:
        path: File identifier (path string or ``"<memory>"``).
        header_lines: Header records in file order, ``@Begin`` and ``@End`` included.
        tier_lines: Main and dependent tier records in file order.
    """

    path: str
    header_lines: tuple[TierLine, ...]
    tier_lines: tuple[TierLine, ...]

    def headers(self, name: str) -> list[str]:
        """Contents of every header called ``name`` (with or without ``@``)."""
        code = name if name.startswith("@") else f"@{name}"
        return [h.content for h in self.header_lines if h.code == code]

    def main_tiers(self) -> Iterator[tuple[TierLine, dict[str, TierLine]]]:
        """Yield each main tier with the dependent tiers attached to it.

        Dependent tiers attach to the nearest preceding main tier; the parser
        guarantees one exists.
        """
        current: TierLine | None = None
        dependents: dict[str, TierLine] = {}
        for tier in self.tier_lines:
            if tier.is_main:
                if current is not None:
                    yield current, dependents
                current, dependents = tier, {}
            elif current is not None:
                dependents.setdefault(tier.code, tier)
        if current is not None:
            yield current, dependents

    def speakers(self) -> list[str]:
        """Distinct main-tier speaker codes in order of first appearance."""
        seen: dict[str, None] = {}
        for tier in self.tier_lines:
            if tier.is_main:
                seen.setdefault(tier.speaker, None)
        return list(seen)


@dataclass(frozen=True)
class Token:
    """A cleaned transcript token.

    Attributes:
        surface: Text form; never empty, never contains whitespace.
        kind: Word, filler, fragment, terminator or placeholder.
        upos: Universal POS tag once annotated.
        retraced: True for material inside a repetition or retracing scope.
            %mor does not analyze it, so alignment skips it.
    """

    surface: str
    kind: TokenKind = TokenKind.WORD
    upos: UposTag | None = None
    retraced: bool = False

    def __post_init__(self) -> None:
        if not self.surface:
            raise ValueError("Token surface must be non-empty")
        if any(ch.isspace() for ch in self.surface):
            raise ValueError(f"Token surface must not contain whitespace: {self.surface!r}")
        if (
            self.kind is TokenKind.TERMINATOR
            and self.upos is not None
            and self.upos is not UposTag.PUNCT
        ):
            raise ValueError(f"Terminator '{self.surface}' must be tagged PUNCT, got {self.upos}")

    @property
    def is_alignable(self) -> bool:
        """Whether %mor carries an item for this token."""
        return not self.retraced and self.kind in (TokenKind.WORD, TokenKind.TERMINATOR)

    def with_tag(self, tag: UposTag) -> Token:
        return replace(self, upos=tag)

    def to_chat(self) -> str:
        """Render as CHAT main-tier text (scope markers excluded)."""
        if self.kind is TokenKind.FILLER:
            return f"&-{self.surface}"
        if self.kind is TokenKind.FRAGMENT:
            return f"&+{self.surface}"
        return self.surface


@dataclass(frozen=True)
class Utterance:
    """One target-speaker utterance.

    Attributes:
        speaker: Participant code (``"PAR"``).
        tokens: Ordered tokens, terminator last when present.
        mor_items: %mor items parallel to the alignable tokens, or None when the
            utterance had no %mor tier. Comma items are not kept.
        pauses: Number of pause markers removed during cleaning.
    """

    speaker: str
    tokens: tuple[Token, ...]
    mor_items: tuple[str, ...] | None = None
    pauses: int = 0

    @property
    def terminator(self) -> Terminator:
        """Category of the last terminator token."""
        for token in reversed(self.tokens):
            if token.kind is TokenKind.TERMINATOR:
                return Terminator.from_mark(token.surface)
        return Terminator.NONE

    @property
    def alignable_tokens(self) -> list[Token]:
        return [t for t in self.tokens if t.is_alignable]

    @property
    def is_aligned(self) -> bool | None:
        """True/False when %mor is present and its length does/does not match.

        None when there is no %mor tier.
        """
        if self.mor_items is None:
            return None
        return len(self.mor_items) == len(self.alignable_tokens)

    def to_chat_text(self) -> str:
        """Render tokens as main-tier text.

        Retraced material is re-emitted inside a ``<...> [/]`` scope so cleaning
        the rendered line reproduces the same token stream. Only target-speaker
        content is rendered; headers and dependent tiers are not.
        """
        parts: list[str] = []
        scope: list[str] = []
        for token in self.tokens:
            if token.retraced:
                scope.append(token.to_chat())
                continue
            if scope:
                parts.append(f"<{' '.join(scope)}> [/]")
                scope = []
            parts.append(token.to_chat())
        if scope:
            parts.append(f"<{' '.join(scope)}> [/]")
        return " ".join(parts)


@dataclass(frozen=True)
class TranscriptRef:
    """Identity of a transcript inside feature matrices."""

    subject_id: str
    session_id: int
    label: Label

    def __str__(self) -> str:
        return f"{self.subject_id}-{self.session_id} ({self.label})"


@dataclass(frozen=True)
class Transcript:
    """A cleaned transcript of one recording session.

    Attributes:
        subject_id: Participant identifier; non-empty.
        session_id: Recording index.
        label: Diagnosis group.
        utterances: Target-speaker utterances in file order.
        source_path: Provenance of the source file.

    Example:
        >>> t = Transcript("001", 0, Label.CONTROL, (), "control/001-0.cha")
        >>> t.ref
        TranscriptRef(subject_id='001', session_id=0, label=<Label.CONTROL: 'control'>)
    """

    subject_id: str
    session_id: int
    label: Label
    utterances: tuple[Utterance, ...] = field(default_factory=tuple)
    source_path: str = ""

    def __post_init__(self) -> None:
        if not self.subject_id:
            raise ValueError("Transcript subject_id must be non-empty")
        if not isinstance(self.label, Label):
            raise ValueError(f"Transcript label must be a Label, got {self.label!r}")

    @property
    def ref(self) -> TranscriptRef:
        return TranscriptRef(self.subject_id, self.session_id, self.label)

    @property
    def pause_count(self) -> int:
        return sum(u.pauses for u in self.utterances)

    def tokens(self) -> Iterator[Token]:
        """All tokens in order."""
        for utterance in self.utterances:
            yield from utterance.tokens

    def num_tokens(self) -> int:
        return sum(len(u.tokens) for u in self.utterances)

    def is_tagged(self) -> bool:
        """True when every token carries a tag."""
        return all(t.upos is not None for t in self.tokens())

    def tags(self) -> list[UposTag]:
        """Tag sequence; raises if any token is untagged."""
        tags = []
        for token in self.tokens():
            if token.upos is None:
                raise ValueError(f"Transcript {self.ref} has untagged token '{token.surface}'")
            tags.append(token.upos)
        return tags

    def with_utterances(self, utterances: tuple[Utterance, ...]) -> Transcript:
        return replace(self, utterances=utterances)

    def to_description(self) -> str:
        """Human-readable one-paragraph summary."""
        return (
            f"Transcript {self.subject_id}-{self.session_id} [{self.label}]: "
            f"{len(self.utterances)} utterances, {self.num_tokens()} tokens, "
            f"{self.pause_count} pauses\n  Source: {self.source_path or '-'}"
        )
