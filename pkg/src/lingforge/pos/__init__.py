"""Universal POS annotation from %mor tiers or external tag files."""

from lingforge.pos.annotate import (
    TaggingReport,
    annotate_corpus,
    annotate_transcript,
    check_quality_gate,
    load_external_tags,
)
from lingforge.pos.mapping import MorMappingTable, map_mor_to_upos

__all__ = [
    "MorMappingTable",
    "TaggingReport",
    "annotate_corpus",
    "annotate_transcript",
    "check_quality_gate",
    "load_external_tags",
    "map_mor_to_upos",
]
