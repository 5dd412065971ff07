"""CHAT corpus handling: cleaning, identity, loading and a synthetic generator."""

from lingforge.corpus.cleaning import clean_transcript, tokenize_main_tier
from lingforge.corpus.identity import LabelManifest, TranscriptIdentity, resolve_identity
from lingforge.corpus.loader import CorpusLoad, find_chat_files, load_corpus
from lingforge.corpus.synth import SynthConfig, write_synthetic_corpus

__all__ = [
    "CorpusLoad",
    "LabelManifest",
    "SynthConfig",
    "TranscriptIdentity",
    "clean_transcript",
    "find_chat_files",
    "load_corpus",
    "resolve_identity",
    "tokenize_main_tier",
    "write_synthetic_corpus",
]
