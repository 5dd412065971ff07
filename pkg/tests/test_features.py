"""Tests for token streams and feature extraction."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lingforge.corpus.loader import load_corpus
from lingforge.errors import EmptyStream, EmptyTranscript, InsufficientData, NoWordTokens
from lingforge.features.extract import (
    BASE_FEATURES,
    POS_FEATURES,
    build_feature_matrix,
    extract_feature_vector,
    feature_names,
)
from lingforge.features.lexical import (
    build_token_stream,
    build_word_stream,
    compute_content_word_ratio,
    compute_mattr,
    compute_semantic_coherence,
    compute_ttr,
)
from lingforge.features.structural import (
    compute_pos_diversity,
    compute_pos_proportions,
    count_sentences,
)
from lingforge.models.enums import Label, Representation, TokenKind, UposTag
from lingforge.models.features import MISSING
from lingforge.models.transcript import Token, Transcript, Utterance
from lingforge.pos.annotate import annotate_corpus


WORD_TAGS = [tag for tag in UposTag if tag is not UposTag.PUNCT]
surfaces = st.text(alphabet="abcdefghij", min_size=1, max_size=6)
utterance_lists = st.lists(
    st.lists(st.tuples(surfaces, st.sampled_from(WORD_TAGS)), min_size=1, max_size=8),
    min_size=1,
    max_size=6,
)


def _tagged(utterances) -> Transcript:
    """Transcript from ``[(surface, tag), ...]`` per utterance, each ending in a period."""
    built = tuple(
        Utterance(
            "PAR",
            tuple(Token(surface, upos=tag) for surface, tag in words)
            + (Token(".", TokenKind.TERMINATOR, UposTag.PUNCT),),
        )
        for words in utterances
    )
    return Transcript("001", 0, Label.CONTROL, built, "control/001-0.cha")


@pytest.fixture
def tagged_mini(mini_corpus) -> list[Transcript]:
    tagged, _ = annotate_corpus(list(load_corpus(mini_corpus).transcripts))
    return tagged


class TestTokenStreams:
    """Test cases for the three representations."""

    def test_pos_enhanced(self, make_transcript):
        t = make_transcript("the/DET boy/NOUN runs/VERB fast/ADV ./PUNCT")
        assert build_token_stream(t, Representation.POS_ENHANCED) == [
            "DET",
            "boy",
            "runs",
            "fast",
            "PUNCT",
        ]

    def test_pos_only(self, make_transcript):
        t = make_transcript("the/DET Boy/NOUN ./PUNCT")
        assert build_token_stream(t, Representation.POS_ONLY) == ["DET", "NOUN", "PUNCT"]

    def test_raw_lowercases_and_drops_terminators(self, make_transcript):
        t = make_transcript("The/DET Boy/NOUN ./PUNCT")
        assert build_token_stream(t, Representation.RAW) == ["the", "boy"]

    def test_raw_needs_no_tags(self, make_transcript):
        assert build_word_stream(make_transcript("the boy ."), Representation.RAW) == [
            "the",
            "boy",
        ]

    def test_word_stream_drops_punct(self, make_transcript):
        t = make_transcript("the/DET boy/NOUN ./PUNCT")
        assert build_word_stream(t, Representation.POS_ENHANCED) == ["DET", "boy"]

    def test_propn_toggle(self, make_transcript):
        t = make_transcript("Mary/PROPN ran/VERB ./PUNCT")
        assert build_token_stream(t, Representation.POS_ENHANCED)[0] == "mary"
        assert build_token_stream(t, Representation.POS_ENHANCED, include_propn=False)[0] == (
            "PROPN"
        )

    def test_untagged_token(self, make_transcript):
        with pytest.raises(ValueError, match="untagged"):
            build_token_stream(make_transcript("the boy ."), Representation.POS_ONLY)

    def test_empty_transcript(self):
        t = Transcript("001", 0, Label.CONTROL)
        with pytest.raises(EmptyTranscript):
            build_token_stream(t, Representation.RAW)


class TestLexicalMeasures:
    """Test cases for TTR, MATTR, content ratio and coherence."""

    def test_ttr(self):
        assert compute_ttr(["the", "cat", "sat", "on", "the", "mat"]) == pytest.approx(5 / 6)

    def test_ttr_empty(self):
        with pytest.raises(EmptyStream):
            compute_ttr([])

    def test_mattr_alternating(self):
        assert compute_mattr(["a", "b", "a", "b"], window=2) == pytest.approx(1.0)

    def test_mattr_runs(self):
        assert compute_mattr(["a", "a", "b", "b"], window=2) == pytest.approx(2 / 3)

    def test_mattr_short_stream_is_ttr(self):
        tokens = ["the", "cat", "sat", "on", "the", "mat"]
        assert compute_mattr(tokens, window=50) == compute_ttr(tokens)

    def test_mattr_matches_brute_force(self):
        tokens = "a b c a b d e a a f b c".split()
        window = 4
        windows = [tokens[i : i + window] for i in range(len(tokens) - window + 1)]
        expected = sum(len(set(w)) / window for w in windows) / len(windows)
        assert compute_mattr(tokens, window) == pytest.approx(expected)

    def test_mattr_bad_window(self):
        with pytest.raises(ValueError):
            compute_mattr(["a"], window=0)

    def test_content_word_ratio(self, make_transcript):
        t = make_transcript("the/DET boy/NOUN runs/VERB ./PUNCT")
        assert compute_content_word_ratio(t) == pytest.approx(2 / 3)

    def test_content_word_ratio_all_punct(self, make_transcript):
        with pytest.raises(NoWordTokens):
            compute_content_word_ratio(make_transcript("./PUNCT"))

    def test_coherence_identical_utterances(self, make_transcript):
        t = make_transcript("boy/NOUN falls/VERB ./PUNCT", "the/DET boy/NOUN falls/VERB ./PUNCT")
        assert compute_semantic_coherence(t) == pytest.approx(1.0)

    def test_coherence_disjoint(self, make_transcript):
        t = make_transcript("boy/NOUN ./PUNCT", "girl/NOUN ./PUNCT")
        assert compute_semantic_coherence(t) == 0.0

    def test_coherence_single_utterance(self, make_transcript):
        assert compute_semantic_coherence(make_transcript("boy/NOUN ./PUNCT")) is MISSING

    def test_coherence_skips_empty_pairs(self, make_transcript):
        """Pairs with a content-free utterance do not count."""
        t = make_transcript("boy/NOUN ./PUNCT", "~uh/INTJ ./PUNCT", "boy/NOUN ./PUNCT")
        assert compute_semantic_coherence(t) is MISSING


class TestStructural:
    """Test cases for sentence counts and POS distribution."""

    def test_sentence_without_terminator(self, make_transcript):
        t = make_transcript("the/DET boy/NOUN", "he/PRON ran/VERB ./PUNCT")
        assert count_sentences(t) == 2

    def test_pos_proportions(self, make_transcript):
        t = make_transcript("a/NOUN b/NOUN c/VERB ./PUNCT")
        shares = compute_pos_proportions(t)
        assert list(shares) == list(UposTag)
        assert shares[UposTag.NOUN] == 0.5
        assert shares[UposTag.VERB] == 0.25
        assert shares[UposTag.PUNCT] == 0.25
        assert math.fsum(shares.values()) == pytest.approx(1.0)

    def test_pos_diversity_two_tags(self, make_transcript):
        t = make_transcript("boy/NOUN ran/VERB")
        assert compute_pos_diversity(t) == pytest.approx(math.log(2) / math.log(17))

    def test_pos_diversity_uniform(self, make_transcript):
        t = make_transcript(" ".join(f"w{i}/{tag}" for i, tag in enumerate(UposTag)))
        assert compute_pos_diversity(t) == pytest.approx(1.0)

    def test_pos_diversity_single_tag(self, make_transcript):
        assert compute_pos_diversity(make_transcript("boy/NOUN girl/NOUN")) == 0.0


class TestFeatureVector:
    """Test cases for extract_feature_vector."""

    def test_feature_names(self):
        assert feature_names(Representation.RAW) == BASE_FEATURES
        assert feature_names(Representation.POS_ONLY) == BASE_FEATURES + POS_FEATURES
        assert len(POS_FEATURES) == 17

    def test_mini_control_raw(self, tagged_mini):
        vector = extract_feature_vector(tagged_mini[0], Representation.RAW)
        assert vector["num_tokens"] == 22
        assert vector["num_types"] == 14
        assert vector["TTR"] == pytest.approx(14 / 22)
        assert vector["num_sentences"] == 3
        assert vector["mean_sent_len"] == pytest.approx(22 / 3)
        assert vector["content_word_ratio"] == pytest.approx(10 / 22)
        assert vector["semantic_coherence"] == 0.0

    def test_pos_only_blanks_lexical_features(self, tagged_mini):
        vector = extract_feature_vector(tagged_mini[0], Representation.POS_ONLY)
        assert vector["content_word_ratio"] is MISSING
        assert vector["semantic_coherence"] is MISSING
        assert vector["NOUN"] == pytest.approx(7 / 25)

    def test_values_in_range(self, tagged_mini):
        for transcript in tagged_mini:
            vector = extract_feature_vector(transcript, Representation.POS_ENHANCED)
            for name in ("TTR", "MATTR", "content_word_ratio", "pos_diversity", *POS_FEATURES):
                assert 0.0 <= vector[name] <= 1.0


class TestFeatureInvariances:
    """Property tests for surface renaming and utterance order."""

    @settings(max_examples=200, deadline=None)
    @given(utterance_lists, st.data())
    def test_pos_only_ignores_surfaces(self, utterances, data):
        renamed = [
            [(data.draw(surfaces), tag) for _, tag in words] for words in utterances
        ]
        original = extract_feature_vector(_tagged(utterances), Representation.POS_ONLY)
        relabeled = extract_feature_vector(_tagged(renamed), Representation.POS_ONLY)
        assert relabeled.values == original.values

    @settings(max_examples=200, deadline=None)
    @given(utterance_lists, st.data())
    def test_utterance_order_free_features(self, utterances, data):
        """Everything but MATTR and coherence ignores utterance order."""
        shuffled = data.draw(st.permutations(utterances))
        for representation in Representation:
            original = extract_feature_vector(_tagged(utterances), representation)
            permuted = extract_feature_vector(_tagged(shuffled), representation)
            for name, a, b in zip(original.names, original.values, permuted.values, strict=True):
                if name in ("MATTR", "semantic_coherence"):
                    continue
                if a is MISSING:
                    assert b is MISSING
                else:
                    assert b == pytest.approx(a, abs=1e-12), name


class TestFeatureMatrix:
    """Test cases for build_feature_matrix."""

    def test_row_order_and_shape(self, tagged_mini):
        matrix = build_feature_matrix(list(reversed(tagged_mini)), Representation.POS_ENHANCED)
        assert matrix.shape == (5, len(BASE_FEATURES) + 17)
        refs = [(r.transcript_ref.subject_id, r.transcript_ref.session_id) for r in matrix.rows]
        assert refs == [("001", 0), ("002", 0), ("101", 0), ("101", 1), ("102", 0)]
        assert list(matrix.labels()) == [0, 0, 1, 1, 1]

    def test_pos_only_drops_missing_columns(self, tagged_mini):
        matrix = build_feature_matrix(tagged_mini, Representation.POS_ONLY)
        assert matrix.dropped_columns == ("content_word_ratio", "semantic_coherence")
        assert "content_word_ratio" not in matrix.feature_names

    def test_partially_missing_column_kept(self, tagged_mini):
        """RAW keeps semantic_coherence when any row has a value."""
        matrix = build_feature_matrix(tagged_mini, Representation.RAW)
        assert "semantic_coherence" in matrix.feature_names

    def test_threads_do_not_change_result(self, tagged_mini):
        one = build_feature_matrix(tagged_mini, Representation.POS_ENHANCED, threads=1)
        four = build_feature_matrix(tagged_mini, Representation.POS_ENHANCED, threads=4)
        assert one == four

    def test_single_label(self, tagged_mini):
        controls = [t for t in tagged_mini if t.label is Label.CONTROL]
        with pytest.raises(InsufficientData, match="dementia"):
            build_feature_matrix(controls, Representation.RAW)

    def test_too_few_transcripts(self, tagged_mini):
        with pytest.raises(InsufficientData):
            build_feature_matrix(tagged_mini[:1], Representation.RAW)

    def test_to_array_missing_is_nan(self, make_transcript):
        a = make_transcript("boy/NOUN ./PUNCT", subject_id="1")
        b = make_transcript(
            "girl/NOUN ./PUNCT", "girl/NOUN ./PUNCT", subject_id="2", label=Label.DEMENTIA
        )
        matrix = build_feature_matrix([a, b], Representation.RAW)
        column = matrix.feature_names.index("semantic_coherence")
        X = matrix.to_array()
        assert math.isnan(X[0, column])
        assert X[1, column] == pytest.approx(1.0)

    def test_wordless_transcript_gets_missing_lexical_features(self, make_transcript, caplog):
        """A transcript whose tokens are all PUNCT does not abort the matrix."""
        a = make_transcript("boy/NOUN runs/VERB ./PUNCT", subject_id="1")
        b = make_transcript("hmm/PUNCT ./PUNCT", subject_id="2", label=Label.DEMENTIA)
        matrix = build_feature_matrix([a, b], Representation.POS_ENHANCED)
        row = dict(zip(matrix.feature_names, matrix.rows[1].values, strict=True))
        assert row["TTR"] is MISSING
        assert row["MATTR"] is MISSING
        assert row["content_word_ratio"] is MISSING
        assert row["num_tokens"] == 0.0
        assert row["PUNCT"] == 1.0
        assert "TTR is MISSING" in caplog.text
