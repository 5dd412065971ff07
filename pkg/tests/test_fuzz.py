"""Property and fuzz tests.

``LINGFORGE_FUZZ_EXAMPLES`` sets the parser fuzz example count (default 2000).
"""

import os

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from lingforge.corpus.cleaning import clean_transcript
from lingforge.corpus.identity import TranscriptIdentity
from lingforge.errors import ChatParseError, LingforgeError
from lingforge.evaluation.splits import assert_group_disjoint, group_kfold
from lingforge.features.structural import compute_pos_proportions
from lingforge.io.chat_parser import parse_chat
from lingforge.io.token_format import decode_token
from lingforge.models.enums import Label, UposTag
from lingforge.models.transcript import Transcript, Utterance

FUZZ_EXAMPLES = int(os.environ.get("LINGFORGE_FUZZ_EXAMPLES", "2000"))

_SEED_FILE = (
    "@UTF8\n@Begin\n@Languages:\teng\n@Participants:\tPAR Participant, INV Investigator\n"
    "@ID:\teng|Pitt|PAR|70;|female|Control||Participant||001|\n"
    "*INV:\ttell me what you see .\n"
    "*PAR:\tthe &uh boy [/] boy is on the stool (.) xxx .\n"
    "%mor:\tdet:art|the n|boy aux|be&3S prep|on det:art|the n|stool .\n"
    "*PAR:\tthe water <is run> [//] is running over +...\n"
    "\tthe sink .\n"
    "@End\n"
).encode()

_FRAGMENTS = [
    b"@Begin\n", b"@End\n", b"*PAR:\t", b"%mor:\t", b"\t", b"\n", b"\r\n", b" ", b"[/]",
    b"[//]", b"<", b">", b"&uh", b"&=laughs", b"xxx", b"(.)", b"+...", b".", b"?", b"|",
    b"n|boy", b"@ID:\t", b"\xef\xbb\xbf", b"\xff", b"\x00", b"\xc3\xa9",
]

# Mutations: splice random fragments into a well-formed file.
mutated_files = st.builds(
    lambda cuts, inserts: _mutate(_SEED_FILE, cuts, inserts),
    st.lists(st.integers(min_value=0, max_value=len(_SEED_FILE)), max_size=6),
    st.lists(st.sampled_from(_FRAGMENTS) | st.binary(max_size=8), max_size=6),
)


def _mutate(data: bytes, cuts: list[int], inserts: list[bytes]) -> bytes:
    out = data
    for position, fragment in zip(cuts, inserts, strict=False):
        position = min(position, len(out))
        out = out[:position] + fragment + out[position:]
    for position in cuts[len(inserts) :]:
        out = out[:position] + out[position + 1 :]
    return out


class TestParserFuzz:
    """Arbitrary bytes either parse or raise a ChatParseError."""

    @settings(max_examples=FUZZ_EXAMPLES, deadline=None)
    @given(st.binary(max_size=400))
    def test_random_bytes(self, data):
        try:
            parse_chat(data, "fuzz.cha")
        except ChatParseError:
            pass

    @settings(max_examples=FUZZ_EXAMPLES, deadline=None)
    @given(mutated_files)
    def test_mutated_files(self, data):
        try:
            raw = parse_chat(data, "fuzz.cha")
        except ChatParseError as e:
            assert e.line_no is None or e.line_no >= 1
            return
        identity = TranscriptIdentity("001", 0, Label.CONTROL)
        try:
            transcript = clean_transcript(raw, identity=identity)
        except LingforgeError:
            return
        assert all(u.speaker == "PAR" for u in transcript.utterances)


tags = st.sampled_from([t for t in UposTag if t is not UposTag.PUNCT])


class TestProportions:
    """Tag proportions are a distribution over the 17 tags."""

    @settings(deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(st.lists(st.lists(tags, min_size=1, max_size=12), min_size=1, max_size=6))
    def test_sum_to_one(self, utterance_tags):
        utterances = tuple(
            Utterance(
                "PAR",
                tuple(decode_token(f"w{i}/{tag.value}") for i, tag in enumerate(row))
                + (decode_token("./PUNCT"),),
            )
            for row in utterance_tags
        )
        transcript = Transcript("001", 0, Label.CONTROL, utterances, "control/001-0.cha")
        proportions = compute_pos_proportions(transcript)
        assert list(proportions) == list(UposTag)
        assert sum(proportions.values()) == pytest.approx(1.0)
        assert all(0.0 <= v <= 1.0 for v in proportions.values())
        assert proportions[UposTag.PUNCT] == pytest.approx(
            len(utterance_tags) / sum(len(row) + 1 for row in utterance_tags)
        )


class TestLeakageGuardProperty:
    """Grouped folds never share a subject and cover every row once."""

    @settings(
        max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.filter_too_much]
    )
    @given(
        st.lists(st.integers(min_value=0, max_value=30), min_size=5, max_size=120).filter(
            lambda ids: len(set(ids)) >= 5
        ),
        st.integers(min_value=2, max_value=5),
    )
    def test_random_corpora(self, subject_numbers, k):
        subject_ids = [f"s{n:03d}" for n in subject_numbers]
        plans = group_kfold(subject_ids, k)
        assert len(plans) == k
        covered = sorted(i for plan in plans for i in plan.test_indices)
        assert covered == list(range(len(subject_ids)))
        for plan in plans:
            assert_group_disjoint(plan, subject_ids)
            assert set(plan.train_indices).isdisjoint(plan.test_indices)
