"""Input/output for transcripts and pipeline artifacts.

Architecture:
    - ITranscriptReader: abstract reader interface (protocols.py)
    - ReaderFactory: reader by format name or extension (factories.py)
    - ChatReader / parse_chat: CHAT ``.cha`` parsing (chat_parser.py)
    - TokenFileReader: canonical token files (token_format.py)
    - tag files and artifact persistence (tag_file.py, persistence.py)

Example:
    >>> from lingforge.io import parse_chat_file
    >>> raw = parse_chat_file("control/002-0.cha")
    >>> raw.speakers()
    ['INV', 'PAR']
"""

from lingforge.io.chat_parser import ChatReader, parse_chat, parse_chat_file
from lingforge.io.factories import ReaderFactory
from lingforge.io.persistence import read_feature_matrix, write_feature_matrix
from lingforge.io.protocols import ITranscriptReader
from lingforge.io.tag_file import parse_tag_records, read_tag_file
from lingforge.io.token_format import (
    TokenFileReader,
    read_transcript_file,
    read_transcript_text,
    write_transcript_file,
    write_transcript_text,
)

__all__ = [
    # Main functions
    "parse_chat",
    "parse_chat_file",
    "read_transcript_file",
    "read_transcript_text",
    "write_transcript_file",
    "write_transcript_text",
    "parse_tag_records",
    "read_tag_file",
    "read_feature_matrix",
    "write_feature_matrix",
    # Interface and factory
    "ITranscriptReader",
    "ReaderFactory",
    # Implementations
    "ChatReader",
    "TokenFileReader",
]
