"""POS annotation of cleaned transcripts.

Tags come from the %mor tier by default. Only alignable tokens (non-retraced
words and terminators) have a %mor item; the rest are tagged by rule:

    - terminators: PUNCT
    - fillers: INTJ
    - fragments and unintelligible placeholders: X
    - retraced words: the tag of the next non-retraced token with the same
      lowercased surface in the utterance, else X

An utterance whose alignable token count differs from its %mor item count is
misaligned: its tokens are tagged by the same rules with X for every word, a
warning is logged, and in strict mode :class:`AlignmentFailure` is raised.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from lingforge.errors import AlignmentFailure, LengthMismatch, MissingTags, QualityGateFailure
from lingforge.io.tag_file import TagRecord, read_tag_file
from lingforge.models.enums import TokenKind, UposTag
from lingforge.models.transcript import Token, Transcript, Utterance
from lingforge.pos.mapping import MorMappingTable, map_mor_to_upos

logger = logging.getLogger(__name__)


@dataclass
class TaggingReport:
    """Annotation quality summary over one or more transcripts.

    Attributes:
        transcripts: Transcripts annotated.
        tokens: Tokens tagged.
        word_tokens: Tokens of kind word.
        x_word_tokens: Word tokens tagged X.
        unknown_categories: Unknown MOR categories and their counts.
        misaligned: ``"<subject>-<session>#<utterance>"`` of misaligned utterances.
        external: Transcripts tagged from external tag files.
    """

    transcripts: int = 0
    tokens: int = 0
    word_tokens: int = 0
    x_word_tokens: int = 0
    unknown_categories: Counter[str] = field(default_factory=Counter)
    misaligned: list[str] = field(default_factory=list)
    external: int = 0

    @property
    def x_rate(self) -> float:
        """Share of word tokens tagged X (0.0 when there are no word tokens)."""
        return self.x_word_tokens / self.word_tokens if self.word_tokens else 0.0

    def merge(self, other: TaggingReport) -> None:
        self.transcripts += other.transcripts
        self.tokens += other.tokens
        self.word_tokens += other.word_tokens
        self.x_word_tokens += other.x_word_tokens
        self.unknown_categories.update(other.unknown_categories)
        self.misaligned.extend(other.misaligned)
        self.external += other.external

    def count(self, transcript: Transcript) -> None:
        self.transcripts += 1
        for token in transcript.tokens():
            self.tokens += 1
            if token.kind is TokenKind.WORD:
                self.word_tokens += 1
                if token.upos is UposTag.X:
                    self.x_word_tokens += 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "transcripts": self.transcripts,
            "tokens": self.tokens,
            "word_tokens": self.word_tokens,
            "x_word_tokens": self.x_word_tokens,
            "x_rate": self.x_rate,
            "unknown_categories": dict(sorted(self.unknown_categories.items())),
            "misaligned": list(self.misaligned),
            "external": self.external,
        }

    def to_description(self) -> str:
        unknown = ", ".join(f"{k} ({v})" for k, v in self.unknown_categories.most_common(10))
        return f"""Tagging Report:
  Transcripts: {self.transcripts} ({self.external} from tag files)
  Tokens: {self.tokens} ({self.word_tokens} words)
  X-tagged words: {self.x_word_tokens} ({self.x_rate:.2%})
  Misaligned utterances: {len(self.misaligned)}
  Unknown MOR categories: {unknown or "none"}"""


# =============================================================================
# %mor annotation
# =============================================================================


def annotate_transcript(
    transcript: Transcript,
    table: MorMappingTable | None = None,
    *,
    strict: bool = False,
    min_mor_coverage: float = 0.9,
    report: TaggingReport | None = None,
) -> Transcript:
    """Tag every token from the %mor tier.

    Args:
        transcript: Cleaned transcript.
        table: MOR mapping table; the bundled one by default.
        strict: Raise on the first misaligned utterance.
        min_mor_coverage: Minimum share of utterances carrying %mor.
        report: Optional report updated in place.

    Returns:
        Transcript with a tag on every token.

    Raises:
        MissingTags: If fewer than ``min_mor_coverage`` of utterances have %mor.
        AlignmentFailure: In strict mode, on a misaligned utterance.
    """
    table = table or MorMappingTable.load_bundled()
    covered = sum(1 for u in transcript.utterances if u.mor_items is not None)
    total = len(transcript.utterances)
    if total == 0 or covered / total < min_mor_coverage:
        raise MissingTags(
            f"{transcript.source_path or transcript.ref}: %mor present on {covered}/{total} "
            f"utterances (need {min_mor_coverage:.0%}) and no external tag file"
        )

    local = TaggingReport()
    utterances = []
    for index, utterance in enumerate(transcript.utterances):
        tags = _tag_utterance(utterance, table, local.unknown_categories)
        if tags is None:
            where = f"{transcript.subject_id}-{transcript.session_id}#{index}"
            message = (
                f"{transcript.source_path or where}: utterance {index} has "
                f"{len(utterance.alignable_tokens)} alignable tokens but "
                f"{len(utterance.mor_items or ())} %mor items"
            )
            if strict:
                raise AlignmentFailure(message)
            logger.warning("%s; tagging its words X", message)
            local.misaligned.append(where)
            tags = _rule_tags(utterance.tokens, [None] * len(utterance.tokens))
        utterances.append(_with_tags(utterance, tags))

    tagged = transcript.with_utterances(tuple(utterances))
    local.count(tagged)
    if report is not None:
        report.merge(local)
    return tagged


def _tag_utterance(
    utterance: Utterance, table: MorMappingTable, unknown: Counter[str]
) -> list[UposTag] | None:
    """Tags for one utterance, or None when it is misaligned."""
    if utterance.mor_items is None:
        return _rule_tags(utterance.tokens, [None] * len(utterance.tokens))
    alignable = [i for i, t in enumerate(utterance.tokens) if t.is_alignable]
    if len(alignable) != len(utterance.mor_items):
        return None
    mapped: list[UposTag | None] = [None] * len(utterance.tokens)
    for position, item in zip(alignable, utterance.mor_items, strict=True):
        mapped[position] = map_mor_to_upos(item, table, unknown)
    return _rule_tags(utterance.tokens, mapped)


def _rule_tags(tokens: tuple[Token, ...], mapped: list[UposTag | None]) -> list[UposTag]:
    tags: list[UposTag | None] = []
    for token, tag in zip(tokens, mapped, strict=True):
        if token.kind is TokenKind.TERMINATOR:
            tags.append(UposTag.PUNCT)
        elif token.kind is TokenKind.FILLER:
            tags.append(UposTag.INTJ)
        elif token.kind in (TokenKind.FRAGMENT, TokenKind.PLACEHOLDER):
            tags.append(UposTag.X)
        elif token.retraced:
            tags.append(None)
        else:
            tags.append(tag if tag is not None else UposTag.X)

    # Retraced words take the tag of their next fluent occurrence.
    for i, token in enumerate(tokens):
        if tags[i] is not None:
            continue
        surface = token.surface.lower()
        tags[i] = next(
            (
                tags[j]
                for j in range(i + 1, len(tokens))
                if not tokens[j].retraced and tokens[j].surface.lower() == surface
            ),
            UposTag.X,
        )
    return [tag if tag is not None else UposTag.X for tag in tags]


def _with_tags(utterance: Utterance, tags: list[UposTag]) -> Utterance:
    tokens = tuple(t.with_tag(tag) for t, tag in zip(utterance.tokens, tags, strict=True))
    return Utterance(utterance.speaker, tokens, utterance.mor_items, utterance.pauses)


# =============================================================================
# External tags
# =============================================================================


def load_external_tags(
    transcript: Transcript,
    records: list[list[TagRecord]],
    report: TaggingReport | None = None,
) -> Transcript:
    """Attach externally produced tags positionally.

    Args:
        transcript: Cleaned transcript.
        records: Per-utterance ``(token, tag)`` records, as read by
            :func:`~lingforge.io.tag_file.parse_tag_records`.
        report: Optional report updated in place.

    Raises:
        LengthMismatch: If utterance or token counts differ.
    """
    if len(records) != len(transcript.utterances):
        raise LengthMismatch(
            f"{transcript.ref}: tag file has {len(records)} utterances, "
            f"transcript has {len(transcript.utterances)}"
        )
    utterances = []
    for index, (utterance, block) in enumerate(zip(transcript.utterances, records, strict=True)):
        if len(block) != len(utterance.tokens):
            raise LengthMismatch(
                f"{transcript.ref}: utterance {index} has {len(utterance.tokens)} tokens "
                f"but {len(block)} tag records"
            )
        tags = []
        for token, (_, tag) in zip(utterance.tokens, block, strict=True):
            if token.kind is TokenKind.TERMINATOR and tag is not UposTag.PUNCT:
                logger.debug("%s: terminator '%s' retagged PUNCT", transcript.ref, token.surface)
                tag = UposTag.PUNCT
            tags.append(tag)
        utterances.append(_with_tags(utterance, tags))

    tagged = transcript.with_utterances(tuple(utterances))
    if report is not None:
        local = TaggingReport(external=1)
        local.count(tagged)
        report.merge(local)
    return tagged


def tag_file_path(tag_dir: str | Path, source_path: str) -> Path:
    """External tag file for a transcript: ``<tag_dir>/<source path>`` with ``.tags``."""
    return Path(tag_dir) / Path(source_path).with_suffix(".tags")


# =============================================================================
# Corpus annotation and quality gate
# =============================================================================


def annotate_corpus(
    transcripts: list[Transcript],
    table: MorMappingTable | None = None,
    *,
    tag_dir: str | Path | None = None,
    strict: bool = False,
    min_mor_coverage: float = 0.9,
    threads: int = 1,
) -> tuple[list[Transcript], TaggingReport]:
    """Annotate a corpus, preferring external tag files when present.

    Returns:
        Tagged transcripts in input order and the merged report.
    """
    table = table or MorMappingTable.load_bundled()

    def annotate(transcript: Transcript) -> tuple[Transcript, TaggingReport]:
        local = TaggingReport()
        if tag_dir is not None:
            path = tag_file_path(tag_dir, transcript.source_path)
            if path.exists():
                return load_external_tags(transcript, read_tag_file(path), local), local
        tagged = annotate_transcript(
            transcript, table, strict=strict, min_mor_coverage=min_mor_coverage, report=local
        )
        return tagged, local

    with ThreadPoolExecutor(max_workers=threads) as pool:
        outcomes = list(pool.map(annotate, transcripts))

    report = TaggingReport()
    for _, local in outcomes:
        report.merge(local)
    for category, count in sorted(report.unknown_categories.items()):
        logger.warning("Unknown MOR category '%s' (%d items) tagged X", category, count)
    return [tagged for tagged, _ in outcomes], report


def check_quality_gate(report: TaggingReport, max_x_rate: float = 0.02) -> None:
    """Fail when too many word tokens were tagged X.

    Raises:
        QualityGateFailure: If ``report.x_rate`` exceeds ``max_x_rate``.
    """
    if report.x_rate > max_x_rate:
        raise QualityGateFailure(
            f"{report.x_word_tokens}/{report.word_tokens} word tokens tagged X "
            f"({report.x_rate:.2%} > {max_x_rate:.2%})\n{report.to_description()}"
        )
