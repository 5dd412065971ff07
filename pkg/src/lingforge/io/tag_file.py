"""External tag files.

Lets any third-party tagger supply the POS tags instead of the %mor tier.
One ``token<TAB>TAG`` record per line, in transcript order, with a blank line
between utterances::

    uh	INTJ
    the	DET
    boy	NOUN
    .	PUNCT

    he	PRON
    ...
"""

from __future__ import annotations

from pathlib import Path

from lingforge.errors import LengthMismatch
from lingforge.models.enums import UposTag
from lingforge.models.transcript import Transcript

TagRecord = tuple[str, UposTag]


def parse_tag_records(text: str, path: str = "<memory>") -> list[list[TagRecord]]:
    """Parse tag file content into per-utterance record lists.

    Raises:
        UnknownTagName: If a tag is not one of the 17 universal tags.
        LengthMismatch: If a record line does not have exactly two fields.
    """
    utterances: list[list[TagRecord]] = []
    current: list[TagRecord] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            if current:
                utterances.append(current)
                current = []
            continue
        fields = line.strip().split("\t")
        if len(fields) != 2:
            raise LengthMismatch(
                f"{path}:{line_no}: expected 'token<TAB>TAG', got {len(fields)} field(s)"
            )
        current.append((fields[0], UposTag.from_name(fields[1])))
    if current:
        utterances.append(current)
    return utterances


def read_tag_file(filepath: str | Path) -> list[list[TagRecord]]:
    path = Path(filepath)
    if not path.exists():
        raise FileNotFoundError(f"Tag file not found: {path}")
    return parse_tag_records(path.read_text(encoding="utf-8"), path=str(path))


def write_tag_text(transcript: Transcript) -> str:
    """Render the tags of an annotated transcript as a tag file.

    Raises:
        ValueError: If any token is untagged.
    """
    blocks = []
    for utterance in transcript.utterances:
        lines = []
        for token in utterance.tokens:
            if token.upos is None:
                raise ValueError(f"Token '{token.surface}' in {transcript.ref} is untagged")
            lines.append(f"{token.surface}\t{token.upos}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
