"""Tests for RunConfig parsing, overrides and stage hashes."""

import pytest

from lingforge.errors import ConfigError
from lingforge.models.config import RunConfig
from lingforge.models.enums import ModelKind, Protocol, Representation, StatsLevel


class TestFromText:
    """Test cases for the key-value config format."""

    def test_defaults(self):
        config = RunConfig()
        assert config.representation is Representation.POS_ENHANCED
        assert config.model is ModelKind.LOGISTIC
        assert config.protocol is Protocol.TRANSCRIPT_SPLIT
        assert config.seed == 42
        assert config.max_depth is None

    def test_full_file(self):
        text = """
        # lingforge run
        representation = POS-only
        model: forest
        protocol = subject-cv
        seed = 7          # trailing comment
        keep_fillers = no
        n_trees = 25
        max_depth = 4
        stats_level = subject
        """
        config = RunConfig.from_text(text)
        assert config.representation is Representation.POS_ONLY
        assert config.model is ModelKind.FOREST
        assert config.protocol is Protocol.SUBJECT_CV
        assert config.seed == 7
        assert config.keep_fillers is False
        assert config.n_trees == 25
        assert config.max_depth == 4
        assert config.stats_level is StatsLevel.SUBJECT

    @pytest.mark.parametrize("word,expected", [("yes", True), ("ON", True), ("0", False)])
    def test_booleans(self, word, expected):
        assert RunConfig.from_text(f"strict = {word}").strict is expected

    def test_none_for_optional(self):
        assert RunConfig.from_text("max_depth = none").max_depth is None
        assert RunConfig.from_text("tag_dir = ").tag_dir is None

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="colour"):
            RunConfig.from_text("colour = blue")

    def test_line_without_separator(self):
        with pytest.raises(ConfigError, match="run.cfg:2"):
            RunConfig.from_text("seed = 1\njust words", source="run.cfg")

    @pytest.mark.parametrize(
        "line",
        [
            "representation = tags",
            "model = svm",
            "seed = seven",
            "strict = maybe",
            "folds = 1",
            "l2_strength = 0",
            "test_fraction = 1.0",
            "subject_aggregate = mode",
            "target_speaker = *PAR",
            "threads = 0",
        ],
    )
    def test_invalid_values(self, line):
        with pytest.raises(ConfigError):
            RunConfig.from_text(line)

    def test_from_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("model = rf\n", encoding="utf-8")
        assert RunConfig.from_file(path).model is ModelKind.FOREST

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            RunConfig.from_file(tmp_path / "absent.cfg")


class TestOverrides:
    """Test cases for CLI flag precedence."""

    def test_flags_beat_file(self):
        config = RunConfig.from_text("seed = 7\nmodel = rf")
        overridden = config.with_overrides(seed=11, model=None, representation="raw")
        assert overridden.seed == 11
        assert overridden.model is ModelKind.FOREST
        assert overridden.representation is Representation.RAW

    def test_no_overrides_returns_same(self):
        config = RunConfig()
        assert config.with_overrides(seed=None) is config

    def test_override_validated(self):
        with pytest.raises(ConfigError):
            RunConfig().with_overrides(folds=1)

    def test_cleaning_policy(self):
        policy = RunConfig(keep_fillers=False, target_speaker="INV").cleaning_policy
        assert policy.keep_fillers is False
        assert policy.target_speaker == "INV"


class TestStageHash:
    """Test cases for per-stage configuration hashes."""

    @pytest.mark.parametrize(
        "change,affected",
        [
            ({"keep_fillers": False}, {"ingest", "features", "experiment", "stats"}),
            ({"representation": Representation.RAW}, {"features", "experiment", "stats"}),
            ({"seed": 1}, {"experiment"}),
            ({"model": ModelKind.FOREST}, {"experiment"}),
            ({"stats_level": StatsLevel.SUBJECT}, {"stats"}),
            ({"threads": 4, "strict": True, "out_dir": "elsewhere"}, set()),
        ],
    )
    def test_sensitivity(self, change, affected):
        base = RunConfig()
        changed = RunConfig(**change)
        for stage in ("ingest", "features", "experiment", "stats"):
            differs = base.stage_hash(stage) != changed.stage_hash(stage)
            assert differs == (stage in affected), stage

    def test_stable(self):
        assert RunConfig(seed=3).stage_hash("experiment") == RunConfig(seed=3).stage_hash(
            "experiment"
        )

    def test_unknown_stage(self):
        with pytest.raises(KeyError):
            RunConfig().stage_hash("report")
