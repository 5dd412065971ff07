"""Reader protocol for transcript files.

Every on-disk transcript format (CHAT ``.cha`` sources, canonical ``.tok``
token files) is read through :class:`ITranscriptReader`, so corpus loading
and the pipeline stages do not care which format they consume.

IDE Navigation Tips:
    - Press F12 on ITranscriptReader to see this interface definition
    - Press Ctrl+F12 (Mac: Cmd+F12) to jump to implementations
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from lingforge.models.transcript import Transcript


class ITranscriptReader(ABC):
    """Abstract base class for transcript readers.

    Implementations:
        - :class:`~lingforge.io.chat_parser.ChatReader`: CHAT ``.cha`` files,
          parsed, identity-resolved and cleaned
        - :class:`~lingforge.io.token_format.TokenFileReader`: canonical
          ``.tok`` files written by the ingest stage

    See Also:
        - ReaderFactory: io/factories.py

    Example:
        >>> from lingforge.io.factories import ReaderFactory
        >>> reader = ReaderFactory.create("chat")
        >>> transcript = reader.read("control/002-0.cha")
    """

    @abstractmethod
    def read(self, filepath: str | Path) -> Transcript:
        """Read one transcript.

        Args:
            filepath: Path to the transcript file.

        Returns:
            Cleaned Transcript (tagged when the format carries tags).

        Raises:
            FileNotFoundError: If the file does not exist
            LingforgeError: If the content cannot be read as a transcript
        """

    @property
    @abstractmethod
    def supported_extensions(self) -> list[str]:
        """File extensions (without dot) handled by this reader."""

    @property
    @abstractmethod
    def format_name(self) -> str:
        """Human-readable format name, e.g. ``"CHAT"``."""
