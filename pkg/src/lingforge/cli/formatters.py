"""Console output formatters for CLI stage summaries.

Formats:
    - table: Rich tables for people
    - json: structured output for scripts
    - summary: one compact line per stage
    - markdown: pipe tables, suitable for pasting into notes
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from enum import Enum
from typing import TYPE_CHECKING, Any

from lingforge.models.enums import Label
from lingforge.models.results import METRIC_NAMES

if TYPE_CHECKING:
    from lingforge.evaluation.runner import ExperimentResult
    from lingforge.models.results import AssociationResult
    from lingforge.pipeline import FeatureStageResult

_HEADLINE_METRICS = ("accuracy", "macro_precision", "macro_recall", "macro_f1")


class OutputFormat(Enum):
    """Supported output formats."""

    TABLE = "table"
    JSON = "json"
    SUMMARY = "summary"
    MARKDOWN = "markdown"

    def __str__(self) -> str:
        return self.value


def _metric_text(result: ExperimentResult, name: str) -> str:
    value, std = result.headline(name)
    return f"{value:.3f}" if std is None else f"{value:.3f} ± {std:.3f}"


def _features_dict(stage: FeatureStageResult) -> dict[str, Any]:
    counts = stage.matrix.label_counts()
    return {
        "representation": stage.matrix.representation.value,
        "rows": stage.matrix.shape[0],
        "features": list(stage.matrix.feature_names),
        "dropped_columns": list(stage.matrix.dropped_columns),
        "counts": {label.value: counts[label] for label in Label},
        "matrix": str(stage.csv_path),
        "tagging": stage.tagging.to_dict(),
    }


class IFormatter(ABC):
    """Renders one stage's outcome as text."""

    @abstractmethod
    def format_manifest(self, manifest: dict[str, Any]) -> str:
        """Format the ingest manifest."""

    @abstractmethod
    def format_features(self, stage: FeatureStageResult) -> str:
        """Format the feature stage outcome."""

    @abstractmethod
    def format_experiment(self, result: ExperimentResult) -> str:
        """Format metrics and top importance of an experiment."""

    @abstractmethod
    def format_stats(self, results: list[AssociationResult]) -> str:
        """Format an association table."""


class TableFormatter(IFormatter):
    """Rich tables, captured to text."""

    def _render(self, *renderables: Any) -> str:
        from rich.console import Console

        console = Console(force_terminal=False, width=100)
        with console.capture() as capture:
            for i, renderable in enumerate(renderables):
                if i:
                    console.print()
                console.print(renderable)
        return str(capture.get())

    def format_manifest(self, manifest: dict[str, Any]) -> str:
        from rich.table import Table

        table = Table(title="Corpus")
        table.add_column("Group", style="cyan")
        table.add_column("Transcripts", style="green", justify="right")
        for label in Label:
            table.add_row(label.value.capitalize(), str(manifest["counts"][label.value]))
        table.add_row("Total", str(manifest["n_transcripts"]))
        table.add_row("Subjects", str(manifest["n_subjects"]))
        renderables: list[Any] = [table]
        if manifest["failures"]:
            skipped = Table(title="Skipped files")
            skipped.add_column("File", style="yellow")
            skipped.add_column("Error")
            for failure in manifest["failures"]:
                skipped.add_row(failure["path"], failure["error"])
            renderables.append(skipped)
        return self._render(*renderables)

    def format_features(self, stage: FeatureStageResult) -> str:
        from rich.table import Table

        data = _features_dict(stage)
        table = Table(title=f"Features [{data['representation']}]", show_header=False)
        table.add_column("Property", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("Rows", str(data["rows"]))
        table.add_row("Features", str(len(data["features"])))
        table.add_row("Dropped", ", ".join(data["dropped_columns"]) or "-")
        table.add_row("X-tagged words", f"{stage.tagging.x_rate:.2%}")
        table.add_row("Misaligned utterances", str(len(stage.tagging.misaligned)))
        table.add_row("Matrix", data["matrix"])
        return self._render(table)

    def format_experiment(self, result: ExperimentResult) -> str:
        from rich.table import Table

        metrics = Table(title=f"{result.model_kind} / {result.protocol} / {result.representation}")
        metrics.add_column("Metric", style="cyan")
        metrics.add_column("Value", style="green", justify="right")
        for name in _HEADLINE_METRICS:
            metrics.add_row(name, _metric_text(result, name))

        importance = Table(title=f"Top {result.top_k} features")
        importance.add_column("#", justify="right")
        importance.add_column("Feature", style="cyan")
        importance.add_column("Importance", style="green", justify="right")
        for rank, (feature, score) in enumerate(result.top_features(), start=1):
            importance.add_row(str(rank), feature, f"{score:+.4f}")
        return self._render(metrics, importance)

    def format_stats(self, results: list[AssociationResult]) -> str:
        from rich.table import Table

        table = Table(title="Group comparison")
        for column in ("Feature", "Mean Control", "Mean Dementia", "Cliff's δ", "p", "p_adj"):
            table.add_column(column, justify="left" if column == "Feature" else "right")
        for r in results:
            style = "bold" if r.p_adjusted < 0.05 else None
            table.add_row(
                r.feature_name,
                f"{r.mean_control:.4f}",
                f"{r.mean_dementia:.4f}",
                f"{r.cliffs_delta:+.3f}",
                f"{r.p_value:.3g}",
                f"{r.p_adjusted:.3g}",
                style=style,
            )
        return self._render(table)


class JsonFormatter(IFormatter):
    """Indented JSON."""

    def format_manifest(self, manifest: dict[str, Any]) -> str:
        data = {k: manifest[k] for k in ("counts", "n_transcripts", "n_subjects", "failures")}
        return json.dumps(data, indent=2, sort_keys=True)

    def format_features(self, stage: FeatureStageResult) -> str:
        return json.dumps(_features_dict(stage), indent=2, sort_keys=True)

    def format_experiment(self, result: ExperimentResult) -> str:
        return json.dumps(result.to_dict(), indent=2, sort_keys=True)

    def format_stats(self, results: list[AssociationResult]) -> str:
        return json.dumps([r.to_dict() for r in results], indent=2, sort_keys=True)


class SummaryFormatter(IFormatter):
    """One line per stage."""

    def format_manifest(self, manifest: dict[str, Any]) -> str:
        counts = manifest["counts"]
        return (
            f"Corpus: {manifest['n_transcripts']} transcripts "
            f"(control {counts['control']}, dementia {counts['dementia']}), "
            f"{manifest['n_subjects']} subjects, {len(manifest['failures'])} skipped"
        )

    def format_features(self, stage: FeatureStageResult) -> str:
        rows, cols = stage.matrix.shape
        dropped = len(stage.matrix.dropped_columns)
        return (
            f"Features [{stage.matrix.representation}]: {rows} rows x {cols} columns, "
            f"{dropped} dropped, X-rate {stage.tagging.x_rate:.2%}"
        )

    def format_experiment(self, result: ExperimentResult) -> str:
        parts = ", ".join(f"{name} {_metric_text(result, name)}" for name in _HEADLINE_METRICS)
        top = ", ".join(feature for feature, _ in result.top_features()[:5])
        return f"{result.model_kind}/{result.protocol}: {parts} | top: {top}"

    def format_stats(self, results: list[AssociationResult]) -> str:
        significant = [r for r in results if r.p_adjusted < 0.05]
        lines = [f"Group comparison: {len(significant)}/{len(results)} features with p_adj < 0.05"]
        lines += [
            f"  {r.feature_name}: δ={r.cliffs_delta:+.3f} p_adj={r.p_adjusted:.3g}"
            for r in significant
        ]
        return "\n".join(lines)


class MarkdownFormatter(IFormatter):
    """GitHub-flavored pipe tables."""

    @staticmethod
    def _table(header: list[str], rows: list[list[str]]) -> str:
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return "\n".join(lines)

    def format_manifest(self, manifest: dict[str, Any]) -> str:
        rows = [[label.value, str(manifest["counts"][label.value])] for label in Label]
        rows.append(["total", str(manifest["n_transcripts"])])
        return self._table(["Group", "Transcripts"], rows)

    def format_features(self, stage: FeatureStageResult) -> str:
        data = _features_dict(stage)
        rows = [
            ["representation", data["representation"]],
            ["rows", str(data["rows"])],
            ["features", str(len(data["features"]))],
            ["dropped", ", ".join(data["dropped_columns"]) or "-"],
        ]
        return self._table(["Property", "Value"], rows)

    def format_experiment(self, result: ExperimentResult) -> str:
        metrics = self._table(
            ["Metric", "Value"],
            [[name, _metric_text(result, name)] for name in METRIC_NAMES],
        )
        importance = self._table(
            ["Feature", "Importance"],
            [[feature, f"{score:+.4f}"] for feature, score in result.top_features()],
        )
        return f"{metrics}\n\n{importance}"

    def format_stats(self, results: list[AssociationResult]) -> str:
        rows = [
            [
                r.feature_name,
                f"{r.mean_control:.4f}",
                f"{r.mean_dementia:.4f}",
                f"{r.cliffs_delta:+.3f}",
                f"{r.p_value:.3g}",
                f"{r.p_adjusted:.3g}",
            ]
            for r in results
        ]
        return self._table(
            ["feature", "mean_control", "mean_dementia", "cliffs_delta", "p_value", "p_adj"], rows
        )


def get_formatter(format_type: OutputFormat | str) -> IFormatter:
    """Formatter for ``format_type``.

    Raises:
        ValueError: If the format is not recognized.
    """
    if isinstance(format_type, str):
        format_type = OutputFormat(format_type.lower())
    formatters: dict[OutputFormat, type[IFormatter]] = {
        OutputFormat.TABLE: TableFormatter,
        OutputFormat.JSON: JsonFormatter,
        OutputFormat.SUMMARY: SummaryFormatter,
        OutputFormat.MARKDOWN: MarkdownFormatter,
    }
    return formatters[format_type]()
