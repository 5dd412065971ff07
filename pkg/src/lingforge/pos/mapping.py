"""MOR category to universal POS mapping.

The bundled table (``data/mor_upos.tsv``) is a versioned two-column text
resource. Categories are matched by the longest ``:``-segment prefix, so
``pro:sub`` uses its own entry while an unlisted ``adv:foo`` falls back to
``adv``. Categories with no matching entry map to X.

Example:
    >>> table = MorMappingTable.load_bundled()
    >>> map_mor_to_upos("pro:sub|he", table)
    <UposTag.PRON: 'PRON'>
    >>> map_mor_to_upos("n|cookie-PL", table)
    <UposTag.NOUN: 'NOUN'>
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from lingforge.errors import ConfigError, UnknownTagName
from lingforge.models.enums import UposTag

logger = logging.getLogger(__name__)

BUNDLED_TABLE = "mor_upos.tsv"


@dataclass(frozen=True)
class MorMappingTable:
    """Ordered MOR category patterns and their tags.

    Attributes:
        entries: ``(category, tag)`` pairs in file order; categories unique.
        version: Identifier from the ``# version:`` header line.
    """

    entries: tuple[tuple[str, UposTag], ...]
    version: str = "unversioned"
    _index: dict[str, UposTag] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for category, _ in self.entries:
            if category in seen:
                raise ConfigError(f"MOR table {self.version} maps '{category}' twice")
            seen.add(category)
        object.__setattr__(self, "_index", dict(self.entries))

    def lookup(self, category: str) -> UposTag | None:
        """Tag for the longest listed ``:``-prefix of ``category``."""
        index = self._index
        key = category.lower()
        while key:
            if key in index:
                return index[key]
            key = key.rpartition(":")[0]
        return None

    def __len__(self) -> int:
        return len(self.entries)

    # =========================================================================
    # Construction
    # =========================================================================

    @classmethod
    def from_text(cls, text: str, source: str = "<table>") -> MorMappingTable:
        """Parse ``category<TAB>TAG`` lines; ``#`` lines are comments.

        Raises:
            ConfigError: On malformed lines or unknown tag names.
        """
        version = "unversioned"
        entries: list[tuple[str, UposTag]] = []
        for line_no, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                key, sep, value = stripped[1:].partition(":")
                if sep and key.strip() == "version":
                    version = value.strip()
                continue
            fields = stripped.split()
            if len(fields) != 2:
                raise ConfigError(f"{source}:{line_no}: expected 'category<TAB>TAG'")
            try:
                entries.append((fields[0].lower(), UposTag.from_name(fields[1])))
            except UnknownTagName as e:
                raise ConfigError(f"{source}:{line_no}: {e}") from None
        return cls(tuple(entries), version)

    @classmethod
    def from_file(cls, path: str | Path) -> MorMappingTable:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"MOR table not found: {path}")
        return cls.from_text(path.read_text(encoding="utf-8"), source=str(path))

    @classmethod
    def load_bundled(cls) -> MorMappingTable:
        """The table shipped with the package (cached)."""
        return _bundled()


@lru_cache(maxsize=1)
def _bundled() -> MorMappingTable:
    text = resources.files("lingforge.pos").joinpath("data", BUNDLED_TABLE).read_text("utf-8")
    return MorMappingTable.from_text(text, source=BUNDLED_TABLE)


def mor_category(mor_code: str) -> str:
    """Category of a MOR item: ``"un#adj|happy~aux|be"`` -> ``"adj"``.

    Returns ``""`` for items without a category (terminators).
    """
    head = mor_code.split("~", 1)[0]
    category, sep, _ = head.partition("|")
    if not sep:
        return ""
    return category.rpartition("#")[2]


def map_mor_to_upos(
    mor_code: str,
    table: MorMappingTable,
    unknown: Counter[str] | None = None,
) -> UposTag:
    """Map one MOR item to a universal tag.

    Args:
        mor_code: ``category|lemma&affixes`` item or a terminator mark.
        table: Mapping table.
        unknown: Optional counter receiving unknown categories.

    Returns:
        The mapped tag; PUNCT for terminator marks, X for unknown categories.
    """
    category = mor_category(mor_code)
    if not category:
        if mor_code and not any(ch.isalnum() for ch in mor_code):
            return UposTag.PUNCT
        key = mor_code or "<empty>"
    else:
        tag = table.lookup(category)
        if tag is not None:
            return tag
        key = category
    if unknown is not None:
        unknown[key] += 1
    return UposTag.X
