"""Tests for the per-feature association table."""

import csv

import pytest

from lingforge.errors import ConfigError, InsufficientData
from lingforge.models.enums import Label, Representation, StatsLevel
from lingforge.models.features import MISSING, FeatureMatrix, FeatureVector
from lingforge.models.transcript import TranscriptRef
from lingforge.stats.association import (
    PLOT_COLUMNS,
    TABLE_COLUMNS,
    association_table,
    plot_rows,
    subject_rows,
    write_association_table,
    write_plot_data,
)


def _matrix(names, rows) -> FeatureMatrix:
    """rows: (subject, session, label, values)."""
    vectors = tuple(
        FeatureVector(tuple(names), tuple(values), TranscriptRef(subject, session, label))
        for subject, session, label, values in rows
    )
    return FeatureMatrix(vectors, Representation.RAW)


C, D = Label.CONTROL, Label.DEMENTIA


@pytest.fixture
def small_matrix() -> FeatureMatrix:
    return _matrix(
        ["up", "down", "flat"],
        [
            ("01", 0, C, [4.0, 1.0, 2.0]),
            ("01", 1, C, [6.0, 3.0, 2.0]),
            ("02", 0, C, [5.0, 2.0, 2.0]),
            ("03", 0, D, [1.0, 6.0, 2.0]),
            ("04", 0, D, [2.0, 5.0, 2.0]),
            ("04", 1, D, [3.0, 4.0, 2.0]),
        ],
    )


class TestAssociationTable:
    """Test cases for association_table."""

    def test_directions_and_order(self, small_matrix):
        results = association_table(small_matrix)
        assert [r.feature_name for r in results] == ["down", "up", "flat"]
        by_name = {r.feature_name: r for r in results}
        assert by_name["up"].cliffs_delta == 1.0
        assert by_name["up"].higher_in is Label.CONTROL
        assert by_name["down"].cliffs_delta == -1.0
        assert by_name["flat"].cliffs_delta == 0.0
        assert by_name["flat"].p_value == 1.0
        assert by_name["up"].mean_control == pytest.approx(5.0)
        assert by_name["up"].mean_dementia == pytest.approx(2.0)
        assert by_name["up"].n_control == 3
        assert by_name["up"].method == "exact"

    def test_p_adjusted_dominates_p(self, small_matrix):
        for r in association_table(small_matrix):
            assert r.p_value <= r.p_adjusted <= 1.0

    def test_subject_level_collapses_sessions(self, small_matrix):
        results = {r.feature_name: r for r in association_table(small_matrix, StatsLevel.SUBJECT)}
        assert results["up"].n_control == 2
        assert results["up"].n_dementia == 2
        assert results["up"].mean_control == pytest.approx(5.0)

    def test_threads_do_not_change_results(self, small_matrix):
        assert association_table(small_matrix, threads=3) == association_table(small_matrix)

    def test_missing_values_excluded(self):
        matrix = _matrix(
            ["f"],
            [("01", 0, C, [1.0]), ("02", 0, C, [MISSING]), ("03", 0, D, [2.0])],
        )
        (result,) = association_table(matrix)
        assert result.excluded == 1
        assert result.n_control == 1

    def test_empty_group_feature_skipped(self, caplog):
        matrix = _matrix(
            ["kept", "gone"],
            [("01", 0, C, [1.0, 1.0]), ("02", 0, D, [2.0, MISSING])],
        )
        results = association_table(matrix)
        assert [r.feature_name for r in results] == ["kept"]
        assert "gone" in caplog.text

    def test_missing_label(self):
        matrix = _matrix(["f"], [("01", 0, C, [1.0]), ("02", 0, C, [2.0])])
        with pytest.raises(InsufficientData, match="dementia"):
            association_table(matrix)

    def test_no_testable_feature(self):
        matrix = _matrix(["f"], [("01", 0, C, [1.0]), ("02", 0, D, [MISSING])])
        with pytest.raises(InsufficientData):
            association_table(matrix)

    def test_synthetic_adverbs_higher_in_dementia(self, synthetic_matrix):
        results = {r.feature_name: r for r in association_table(synthetic_matrix)}
        assert results["ADV"].cliffs_delta < 0
        assert results["ADV"].p_adjusted < 0.05

    def test_synthetic_levels_agree_with_one_session(self, synthetic_matrix):
        """With one session per subject both levels see the same rows."""
        transcript = association_table(synthetic_matrix, StatsLevel.TRANSCRIPT)
        subject = association_table(synthetic_matrix, StatsLevel.SUBJECT, "median")
        assert [r.feature_name for r in transcript] == [r.feature_name for r in subject]
        for a, b in zip(transcript, subject, strict=True):
            assert a.cliffs_delta == pytest.approx(b.cliffs_delta)
            assert a.p_adjusted == pytest.approx(b.p_adjusted)


class TestSubjectRows:
    """Test cases for subject_rows."""

    def test_median(self, small_matrix):
        rows = subject_rows(small_matrix, "median")
        assert [label for label, _ in rows] == [C, C, D, D]
        assert rows[0][1] == [5.0, 2.0, 2.0]

    def test_all_missing_stays_missing(self):
        matrix = _matrix(
            ["f"], [("01", 0, C, [MISSING]), ("01", 1, C, [MISSING]), ("02", 0, D, [1.0])]
        )
        assert subject_rows(matrix)[0][1] == [MISSING]

    def test_subject_with_both_labels(self):
        matrix = _matrix(["f"], [("01", 0, C, [1.0]), ("01", 1, D, [2.0])])
        with pytest.raises(InsufficientData, match="01"):
            subject_rows(matrix)

    def test_unknown_aggregate(self, small_matrix):
        with pytest.raises(ConfigError):
            association_table(small_matrix, StatsLevel.SUBJECT, "mode")


class TestOutputs:
    """Test cases for table and plot files."""

    def test_plot_rows_normalized(self, small_matrix):
        rows = plot_rows(association_table(small_matrix))
        assert rows == [["down", -1.0, -1.0], ["up", 1.0, 1.0], ["flat", 0.0, 0.0]]

    def test_plot_rows_all_zero(self):
        matrix = _matrix(["f"], [("01", 0, C, [1.0]), ("02", 0, D, [1.0])])
        assert plot_rows(association_table(matrix)) == [["f", 0.0, 0.0]]

    def test_written_files(self, small_matrix, tmp_path):
        results = association_table(small_matrix)
        write_association_table(results, tmp_path / "assoc.csv")
        write_plot_data(results, tmp_path / "plot.csv")

        with open(tmp_path / "assoc.csv", newline="", encoding="utf-8") as f:
            table = list(csv.reader(f))
        assert table[0] == TABLE_COLUMNS
        assert [row[0] for row in table[1:]] == ["down", "up", "flat"]

        with open(tmp_path / "plot.csv", newline="", encoding="utf-8") as f:
            plot = list(csv.reader(f))
        assert plot[0] == PLOT_COLUMNS
        assert len(plot) == 4
