"""Subject, session and label resolution.

Precedence:
    - subject_id: the custom field of the target speaker's ``@ID`` header,
      else the filename stem before the dash (``001-2.cha`` -> ``"001"``)
    - session_id: the filename suffix after the dash, 0 when absent
    - label: a manifest entry (keyed by file stem or subject id), else the
      nearest path component named ``control`` or ``dementia``
"""

from __future__ import annotations

import csv
import io
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path, PurePath

from lingforge.errors import ConfigError, UnresolvableLabel, UnresolvableSubject
from lingforge.models.enums import Label
from lingforge.models.transcript import RawChatFile

logger = logging.getLogger(__name__)

_STEM = re.compile(r"^(?P<subject>[^-]+)-(?P<session>\d+)$")

# @ID fields: language|corpus|code|age|sex|group|SES|role|education|custom|
_ID_CODE = 2
_ID_CUSTOM = 9


@dataclass(frozen=True)
class TranscriptIdentity:
    """Resolved identity of one transcript file."""

    subject_id: str
    session_id: int
    label: Label
    source_path: str = ""


@dataclass(frozen=True)
class LabelManifest:
    """Explicit label assignments overriding the directory layout.

    Attributes:
        entries: Map from file stem or subject id to label.
    """

    entries: dict[str, Label] = field(default_factory=dict)

    def lookup(self, *keys: str) -> Label | None:
        """Label of the first key present in the manifest."""
        for key in keys:
            if key in self.entries:
                return self.entries[key]
        return None

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_text(cls, text: str, source: str = "<manifest>") -> LabelManifest:
        """Parse ``key,label`` CSV; a ``key,label`` header row is optional.

        Raises:
            ConfigError: On rows that are not two cells or carry an unknown label.
        """
        entries: dict[str, Label] = {}
        for line_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 2:
                raise ConfigError(f"{source}:{line_no}: expected 'key,label', got {row}")
            key, label = row[0].strip(), row[1].strip()
            if line_no == 1 and (key.lower(), label.lower()) == ("key", "label"):
                continue
            try:
                entries[key] = Label.from_name(label)
            except ValueError as e:
                raise ConfigError(f"{source}:{line_no}: {e}") from None
        return cls(entries)

    @classmethod
    def from_csv(cls, path: str | Path) -> LabelManifest:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Label manifest not found: {path}")
        return cls.from_text(path.read_text(encoding="utf-8"), source=str(path))


def resolve_identity(
    raw: RawChatFile,
    path: str,
    manifest: LabelManifest | None = None,
    target_speaker: str = "PAR",
) -> TranscriptIdentity:
    """Resolve subject, session and label for a parsed file.

    Args:
        raw: Parsed CHAT file (its ``@ID`` headers are consulted).
        path: File path used for the filename and directory rules.
        manifest: Optional label overrides.
        target_speaker: Speaker whose ``@ID`` line identifies the subject.

    Raises:
        UnresolvableSubject: No ``@ID`` code and no ``<subject>-<session>`` stem.
        UnresolvableLabel: No manifest entry and no label directory.

    Example:
        >>> from lingforge.io.chat_parser import parse_chat
        >>> raw = parse_chat(b"@Begin\\n*PAR:\\thi .\\n@End\\n")
        >>> resolve_identity(raw, "Pitt/dementia/001-2.cha")
        TranscriptIdentity(subject_id='001', session_id=2, label=<Label.DEMENTIA: 'dementia'>, source_path='Pitt/dementia/001-2.cha')
    """
    pure = PurePath(path.replace("\\", "/"))
    stem = pure.name.split(".", 1)[0]
    match = _STEM.match(stem)

    subject = _participant_code(raw, target_speaker)
    if subject is None:
        if match is None:
            raise UnresolvableSubject(
                f"{path}: no @ID code for {target_speaker} and filename is not "
                f"'<subject>-<session>.cha'"
            )
        subject = match.group("subject")
    session = int(match.group("session")) if match else 0

    label = manifest.lookup(stem, subject) if manifest is not None else None
    if label is None:
        label = _label_from_path(pure)
    if label is None:
        raise UnresolvableLabel(
            f"{path}: no 'control'/'dementia' directory in the path and no manifest entry"
        )
    return TranscriptIdentity(subject, session, label, path)


def _participant_code(raw: RawChatFile, target_speaker: str) -> str | None:
    for content in raw.headers("ID"):
        fields = content.split("|")
        if len(fields) > _ID_CUSTOM and fields[_ID_CODE].strip() == target_speaker:
            code = fields[_ID_CUSTOM].strip()
            if code:
                return code
    return None


def _label_from_path(path: PurePath) -> Label | None:
    for part in reversed(path.parent.parts):
        lowered = part.lower()
        if lowered in (Label.CONTROL.value, Label.DEMENTIA.value):
            return Label.from_name(lowered)
    return None
