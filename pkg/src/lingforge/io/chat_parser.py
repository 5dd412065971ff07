"""CHAT transcript (.cha) parser.

Reads TalkBank CHAT files into :class:`~lingforge.models.transcript.RawChatFile`
objects. Parsing is purely structural: header lines (``@...``), main tiers
(``*PAR:``), dependent tiers (``%mor:``) and tab-indented continuation lines.
Speaker filtering and marker cleaning happen later, in
:mod:`lingforge.corpus.cleaning`.

Architecture:
    - :func:`parse_chat`: bytes in, RawChatFile out; never raises anything but
      :class:`~lingforge.errors.ChatParseError` subclasses
    - :func:`parse_chat_file`: reads a path and delegates to :func:`parse_chat`
    - :class:`ChatReader`: :class:`~lingforge.io.protocols.ITranscriptReader`
      that parses, resolves identity and cleans in one call

References:
    - CHAT manual: https://talkbank.org/manuals/CHAT.pdf
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import TYPE_CHECKING

from lingforge.errors import ChatDecodeError, MalformedTier, MissingBegin, MissingEnd
from lingforge.io.protocols import ITranscriptReader
from lingforge.models.policy import CleaningPolicy
from lingforge.models.transcript import RawChatFile, TierLine

if TYPE_CHECKING:
    from lingforge.corpus.identity import LabelManifest
    from lingforge.models.transcript import Transcript

logger = logging.getLogger(__name__)

_LINE_BREAK = re.compile(r"\r\n|\r|\n")
_MAIN_TIER = re.compile(r"^\*([A-Za-z0-9_\-]+):[ \t]?(.*)$", re.DOTALL)
_DEPENDENT_TIER = re.compile(r"^%([A-Za-z0-9_\-]+):[ \t]?(.*)$", re.DOTALL)
_HEADER_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_ \-]*$")

# Headers allowed before @Begin.
_PRE_BEGIN = {"@UTF8", "@Window", "@Font", "@ColorWords", "@PID"}


class ChatReader(ITranscriptReader):
    """Reader producing cleaned transcripts from ``.cha`` files.

    Args:
        policy: Cleaning policy applied after parsing.
        manifest: Optional label overrides.
        root: Corpus root; when set, provenance is the path relative to it.

    Example:
        >>> reader = ChatReader()
        >>> transcript = reader.read("Pitt/Control/cookie/002-0.cha")
    """

    def __init__(
        self,
        policy: CleaningPolicy | None = None,
        manifest: LabelManifest | None = None,
        root: str | Path | None = None,
    ) -> None:
        self.policy = policy or CleaningPolicy()
        self.manifest = manifest
        self.root = Path(root) if root is not None else None

    @property
    def supported_extensions(self) -> list[str]:
        return ["cha", "CHA"]

    @property
    def format_name(self) -> str:
        return "CHAT"

    def read(self, filepath: str | Path) -> Transcript:
        from lingforge.corpus.cleaning import clean_transcript
        from lingforge.corpus.identity import resolve_identity

        raw = parse_chat_file(filepath)
        provenance = (
            Path(filepath).relative_to(self.root).as_posix()
            if self.root is not None
            else str(filepath)
        )
        identity = resolve_identity(
            raw, provenance, manifest=self.manifest, target_speaker=self.policy.target_speaker
        )
        return clean_transcript(raw, self.policy, identity=identity)


def parse_chat_file(filepath: str | Path) -> RawChatFile:
    """Parse a ``.cha`` file from disk.

    Raises:
        FileNotFoundError: If the file does not exist.
        ChatParseError: If the content is not well-formed CHAT.
    """
    path = Path(filepath)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    return parse_chat(path.read_bytes(), path=str(filepath))


def parse_chat(data: bytes, path: str = "<memory>") -> RawChatFile:
    """Parse CHAT file content.

    Args:
        data: Raw file bytes, expected UTF-8 (a BOM is tolerated).
        path: File identifier recorded on the result and in error messages.

    Returns:
        RawChatFile with every header and tier line in file order and
        continuation lines merged into the preceding record.

    Raises:
        ChatDecodeError: If the bytes are not valid UTF-8.
        MissingBegin: If ``@Begin`` does not open the file.
        MissingEnd: If ``@End`` does not close the file.
        MalformedTier: If a line is neither header, tier, nor continuation,
            or a dependent tier precedes every main tier.

    Example:
        >>> raw = parse_chat(b"@Begin\\n*PAR:\\tthe boy .\\n@End\\n")
        >>> raw.tier_lines[0].code
        '*PAR'
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ChatDecodeError(f"not valid UTF-8 at byte {e.start}", path) from None
    text = text.removeprefix("\ufeff")

    # Each record: [code, parts, line_no, is_header]
    records: list[list] = []
    seen_begin = False
    seen_end = False
    seen_main = False

    for line_no, line in enumerate(_LINE_BREAK.split(text), start=1):
        if not line.strip():
            continue
        if seen_end:
            raise MalformedTier("content after @End", path, line_no)

        if line[0] in "\t ":
            if not records:
                raise MalformedTier("continuation line with nothing to continue", path, line_no)
            records[-1][1].append(line.strip())
            continue

        first = line[0]
        if first == "@":
            code, content = _split_header(line, path, line_no)
            if not seen_begin:
                if code == "@Begin":
                    seen_begin = True
                elif code not in _PRE_BEGIN:
                    raise MissingBegin(f"expected @Begin, found {code}", path, line_no)
            elif code == "@End":
                seen_end = True
            records.append([code, [content] if content else [], line_no, True])
        elif first == "*":
            if not seen_begin:
                raise MissingBegin("tier line before @Begin", path, line_no)
            match = _MAIN_TIER.match(line)
            if match is None:
                raise MalformedTier(f"malformed main tier: {line[:40]!r}", path, line_no)
            seen_main = True
            content = match.group(2).strip()
            records.append([f"*{match.group(1)}", [content] if content else [], line_no, False])
        elif first == "%":
            if not seen_begin:
                raise MissingBegin("tier line before @Begin", path, line_no)
            match = _DEPENDENT_TIER.match(line)
            if match is None:
                raise MalformedTier(f"malformed dependent tier: {line[:40]!r}", path, line_no)
            if not seen_main:
                raise MalformedTier(
                    f"dependent tier %{match.group(1)} precedes every main tier", path, line_no
                )
            content = match.group(2).strip()
            records.append([f"%{match.group(1)}", [content] if content else [], line_no, False])
        else:
            raise MalformedTier(
                f"line is neither header, tier, nor continuation: {line[:40]!r}", path, line_no
            )

    if not seen_begin:
        raise MissingBegin("file has no @Begin header", path)
    if not seen_end:
        raise MissingEnd("file has no @End header", path)

    headers: list[TierLine] = []
    tiers: list[TierLine] = []
    for code, parts, line_no, is_header in records:
        record = TierLine(code=code, content=" ".join(parts), line_no=line_no)
        (headers if is_header else tiers).append(record)

    logger.debug("Parsed %s: %d headers, %d tier lines", path, len(headers), len(tiers))
    return RawChatFile(path=path, header_lines=tuple(headers), tier_lines=tuple(tiers))


def _split_header(line: str, path: str, line_no: int) -> tuple[str, str]:
    """Split ``@Name:\\tcontent`` (or a bare ``@Name``) into code and content."""
    name, sep, content = line[1:].partition(":")
    name = name.strip()
    if not sep:
        name = line[1:].strip()
    if not name or not _HEADER_NAME.match(name):
        raise MalformedTier(f"malformed header: {line[:40]!r}", path, line_no)
    return f"@{name}", content.strip()
