"""Shared fixtures for lingforge tests."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from pathlib import Path

import pytest

from lingforge.corpus.loader import load_corpus
from lingforge.corpus.synth import SynthConfig, write_synthetic_corpus
from lingforge.features.extract import build_feature_matrix
from lingforge.io.token_format import decode_token
from lingforge.models.enums import Label, Representation
from lingforge.models.features import FeatureMatrix
from lingforge.models.transcript import Transcript, Utterance
from lingforge.pos.annotate import annotate_corpus

FIXTURES_DIR = Path(__file__).parent / "fixtures"
MINI_CORPUS = FIXTURES_DIR / "mini"


@pytest.fixture(autouse=True)
def _reset_lingforge_logger() -> Iterator[None]:
    """CLI runs attach a RichHandler and stop propagation; undo that between tests."""
    yield
    logger = logging.getLogger("lingforge")
    logger.handlers.clear()
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def mini_corpus() -> Path:
    """Two control and three dementia transcripts with aligned %mor tiers."""
    return MINI_CORPUS


@pytest.fixture(scope="session")
def synthetic_corpus(tmp_path_factory: pytest.TempPathFactory) -> Path:
    """A 40-subject synthetic corpus with a strong injected group difference."""
    root = tmp_path_factory.mktemp("synth")
    write_synthetic_corpus(root, SynthConfig(subjects=40, sessions=1, effect_scale=1.5, seed=7))
    return root


@pytest.fixture(scope="session")
def synthetic_matrix(synthetic_corpus: Path) -> FeatureMatrix:
    """POS_ENHANCED feature matrix of the synthetic corpus, one row per subject."""
    tagged, _ = annotate_corpus(list(load_corpus(synthetic_corpus).transcripts))
    return build_feature_matrix(tagged, Representation.POS_ENHANCED)


@pytest.fixture
def make_transcript() -> Callable[..., Transcript]:
    """Build a tagged transcript from encoded tokens, one string per utterance.

    Tokens use the ``.tok`` encoding, e.g. ``"~uh/INTJ the/DET boy/NOUN ./PUNCT"``.
    """

    def build(
        *utterances: str,
        subject_id: str = "001",
        session_id: int = 0,
        label: Label = Label.CONTROL,
    ) -> Transcript:
        parsed = tuple(
            Utterance("PAR", tuple(decode_token(item) for item in text.split()))
            for text in utterances
        )
        return Transcript(subject_id, session_id, label, parsed, f"{label}/{subject_id}.cha")

    return build
