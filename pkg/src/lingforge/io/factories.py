"""Factory for transcript readers.

Picks the reader for a format name or file extension. Readers are imported
lazily so the CHAT stack is only loaded when CHAT files are read.

Example:
    >>> from lingforge.io.factories import ReaderFactory
    >>> reader = ReaderFactory.from_path("control/002-0.cha")
    >>> reader.format_name
    'CHAT'
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from lingforge.io.protocols import ITranscriptReader


class ReaderFactory:
    """Factory for :class:`~lingforge.io.protocols.ITranscriptReader` instances.

    Available Formats:
        - "chat": CHAT ``.cha`` source transcripts (parsed and cleaned)
        - "tokens": canonical ``.tok`` files from the ingest stage
    """

    _FORMATS = ("chat", "tokens")

    _EXTENSION_MAP = {
        "cha": "chat",
        "CHA": "chat",
        "tok": "tokens",
    }

    @staticmethod
    def create(format_type: str = "chat", **options: Any) -> ITranscriptReader:
        """Create a reader.

        Args:
            format_type: ``"chat"`` or ``"tokens"``.
            **options: Passed to the reader; the CHAT reader accepts
                ``policy``, ``manifest`` and ``root``, the token reader
                ``expected_hash``.

        Raises:
            ValueError: If the format is unknown.
        """
        if format_type == "chat":
            from lingforge.io.chat_parser import ChatReader

            return ChatReader(**options)
        elif format_type == "tokens":
            from lingforge.io.token_format import TokenFileReader

            return TokenFileReader(**options)
        available = ReaderFactory.available_formats()
        raise ValueError(f"Unknown format: '{format_type}'. Available formats: {available}")

    @staticmethod
    def from_extension(extension: str, **options: Any) -> ITranscriptReader:
        """Create a reader from a file extension (leading dot optional).

        Raises:
            ValueError: If the extension is not recognized.
        """
        ext = extension.lstrip(".")
        if ext in ReaderFactory._EXTENSION_MAP:
            return ReaderFactory.create(ReaderFactory._EXTENSION_MAP[ext], **options)
        supported = list(ReaderFactory._EXTENSION_MAP)
        raise ValueError(f"Unknown extension: '{extension}'. Supported extensions: {supported}")

    @staticmethod
    def from_path(filepath: str | Path, **options: Any) -> ITranscriptReader:
        path = Path(filepath)
        if not path.suffix:
            raise ValueError(f"Cannot determine format: file has no extension: {path}")
        return ReaderFactory.from_extension(path.suffix, **options)

    @staticmethod
    def available_formats() -> list[str]:
        return list(ReaderFactory._FORMATS)

    @staticmethod
    def supported_extensions() -> list[str]:
        return list(ReaderFactory._EXTENSION_MAP)
