"""Canonical line-oriented token format (``.tok``).

The ingest stage writes every cleaned transcript in this format; the features
stage reads it back. Reading a written file reproduces the Transcript exactly.

Layout::

    # lingforge-tokens 1
    # subject_id: 001
    # session_id: 2
    # label: dementia
    # source_path: dementia/001-2.cha
    # pauses: 3
    # config_hash: 3f0c9a1e5b2d7c44
    PAR<TAB>~uh the boy <the <boy is .<TAB>det:art|the n|boy aux|be .<TAB>1

One utterance per line, four tab-separated fields: speaker, tokens, %mor
items (``-`` when the utterance had no %mor tier) and pause count. Token
prefixes encode the kind: ``~`` filler, ``&`` fragment, ``#`` placeholder;
a leading ``<`` flags retraced material. Terminators are written bare. A
``/TAG`` suffix carries the UPOS tag once the transcript is annotated.
"""

from __future__ import annotations

import logging
from pathlib import Path

from lingforge.errors import MalformedArtifact, UnknownTagName
from lingforge.io.protocols import ITranscriptReader
from lingforge.models.enums import Label, TokenKind, UposTag
from lingforge.models.transcript import Token, Transcript, Utterance

logger = logging.getLogger(__name__)

FORMAT_LINE = "# lingforge-tokens 1"

_KIND_PREFIX = {
    TokenKind.FILLER: "~",
    TokenKind.FRAGMENT: "&",
    TokenKind.PLACEHOLDER: "#",
}
_PREFIX_KIND = {prefix: kind for kind, prefix in _KIND_PREFIX.items()}
_NO_MOR = "-"


class TokenFileReader(ITranscriptReader):
    """Reader for ``.tok`` files written by the ingest stage.

    Args:
        expected_hash: Ingest config hash every file must carry; None skips the check.
    """

    def __init__(self, expected_hash: str | None = None) -> None:
        self.expected_hash = expected_hash

    @property
    def supported_extensions(self) -> list[str]:
        return ["tok"]

    @property
    def format_name(self) -> str:
        return "lingforge tokens"

    def read(self, filepath: str | Path) -> Transcript:
        """Read one token file.

        Raises:
            ArtifactMismatch: If the file was written under another ingest config.
        """
        if self.expected_hash is None:
            return read_transcript_file(filepath)
        from lingforge.io.persistence import check_stage_hash

        path = Path(filepath)
        if not path.exists():
            raise FileNotFoundError(f"File not found: {path}")
        text = path.read_text(encoding="utf-8")
        check_stage_hash(
            {"ingest": read_config_hash(text)}, "ingest", self.expected_hash, f"Token file {path}"
        )
        return read_transcript_text(text, path=str(path))


# =============================================================================
# Tokens
# =============================================================================


def encode_token(token: Token) -> str:
    """Render one token with its kind prefix and optional tag suffix."""
    text = _KIND_PREFIX.get(token.kind, "") + token.surface
    if token.retraced:
        text = "<" + text
    if token.upos is not None:
        text = f"{text}/{token.upos}"
    return text


def decode_token(text: str) -> Token:
    """Inverse of :func:`encode_token`.

    Raises:
        ValueError: If the text is not a valid encoded token.
    """
    upos = None
    body, sep, suffix = text.rpartition("/")
    if sep and body:
        try:
            upos = UposTag.from_name(suffix) if suffix.isupper() else None
        except UnknownTagName:
            upos = None
    if upos is None:
        body = text

    retraced = body.startswith("<")
    if retraced:
        body = body[1:]
    kind = _PREFIX_KIND.get(body[:1]) if body else None
    if kind is not None:
        body = body[1:]
    elif body and not any(ch.isalnum() for ch in body):
        kind = TokenKind.TERMINATOR
    else:
        kind = TokenKind.WORD
    return Token(surface=body, kind=kind, upos=upos, retraced=retraced)


# =============================================================================
# Transcripts
# =============================================================================


def write_transcript_text(transcript: Transcript, config_hash: str | None = None) -> str:
    """Serialize a transcript to the canonical token format."""
    lines = [
        FORMAT_LINE,
        f"# subject_id: {transcript.subject_id}",
        f"# session_id: {transcript.session_id}",
        f"# label: {transcript.label}",
        f"# source_path: {transcript.source_path}",
        f"# pauses: {transcript.pause_count}",
    ]
    if config_hash is not None:
        lines.append(f"# config_hash: {config_hash}")
    for utterance in transcript.utterances:
        tokens = " ".join(encode_token(t) for t in utterance.tokens)
        mor = _NO_MOR if utterance.mor_items is None else " ".join(utterance.mor_items)
        lines.append(f"{utterance.speaker}\t{tokens}\t{mor}\t{utterance.pauses}")
    return "\n".join(lines) + "\n"


def read_transcript_text(text: str, path: str = "<memory>") -> Transcript:
    """Parse the canonical token format.

    Raises:
        MalformedArtifact: If the header or any utterance line is invalid.
    """
    header, utterances = _parse_token_text(text, path)
    missing = [key for key in ("subject_id", "session_id", "label") if key not in header]
    if missing:
        raise MalformedArtifact(f"{path}: token file lacks header fields {missing}")
    try:
        return Transcript(
            subject_id=header["subject_id"],
            session_id=int(header["session_id"]),
            label=Label.from_name(header["label"]),
            utterances=tuple(utterances),
            source_path=header.get("source_path", ""),
        )
    except ValueError as e:
        raise MalformedArtifact(f"{path}: {e}") from None


def read_config_hash(text: str) -> str | None:
    """Config hash recorded in a token file header, if any."""
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        key, _, value = line[1:].partition(":")
        if key.strip() == "config_hash":
            return value.strip()
    return None


def write_transcript_file(
    transcript: Transcript, filepath: str | Path, config_hash: str | None = None
) -> None:
    from lingforge.io.persistence import atomic_write_text

    atomic_write_text(filepath, write_transcript_text(transcript, config_hash))


def read_transcript_file(filepath: str | Path) -> Transcript:
    """Read a ``.tok`` file.

    Raises:
        FileNotFoundError: If the file does not exist.
        MalformedArtifact: If the content is invalid.
    """
    path = Path(filepath)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    return read_transcript_text(path.read_text(encoding="utf-8"), path=str(path))


def _parse_token_text(text: str, path: str) -> tuple[dict[str, str], list[Utterance]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_LINE:
        raise MalformedArtifact(f"{path}: not a lingforge token file (expected {FORMAT_LINE!r})")

    header: dict[str, str] = {}
    utterances: list[Utterance] = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if not sep:
                raise MalformedArtifact(f"{path}:{line_no}: malformed header line {line!r}")
            header[key.strip()] = value.strip()
            continue
        utterances.append(_parse_utterance_line(line, path, line_no))
    return header, utterances


def _parse_utterance_line(line: str, path: str, line_no: int) -> Utterance:
    fields = line.split("\t")
    if len(fields) != 4:
        raise MalformedArtifact(
            f"{path}:{line_no}: expected 4 tab-separated fields, got {len(fields)}"
        )
    speaker, token_field, mor_field, pause_field = fields
    try:
        tokens = tuple(decode_token(item) for item in token_field.split())
        mor = None if mor_field == _NO_MOR else tuple(mor_field.split())
        return Utterance(speaker=speaker, tokens=tokens, mor_items=mor, pauses=int(pause_field))
    except ValueError as e:
        raise MalformedArtifact(f"{path}:{line_no}: {e}") from None
