"""Staged pipeline: ingest -> features -> experiment / stats -> report.

Stages hand off through files under ``RunConfig.out_dir``::

    manifest.json                         corpus summary, per-transcript index
    transcripts/<relpath>.tok             cleaned transcripts
    features/<repr>.csv, <repr>.meta.json feature matrix + sidecar
    experiments/<repr>_<model>_<protocol>.json
    models/<repr>_<model>_<protocol>[_fold<k>].json
    stats/<repr>_<level>.csv, <repr>_<level>_plot.csv, <repr>_<level>.meta.json
    report.md

Every JSON artifact stores the stage hashes of the configuration that produced
it; a stage reading an upstream artifact recomputes the hash and refuses to mix
configurations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from lingforge import __version__
from lingforge.corpus.identity import LabelManifest
from lingforge.corpus.loader import CorpusLoad, load_corpus
from lingforge.corpus.synth import SynthConfig, write_synthetic_corpus
from lingforge.errors import ArtifactMismatch, ConfigError, MissingArtifact, ReportIncomplete
from lingforge.evaluation.runner import ExperimentResult, run_experiment
from lingforge.features.extract import build_feature_matrix
from lingforge.io.persistence import (
    atomic_write_text,
    check_stage_hash,
    matrix_paths,
    read_feature_matrix,
    read_json,
    write_feature_matrix,
    write_json,
    write_model,
)
from lingforge.io.factories import ReaderFactory
from lingforge.io.token_format import write_transcript_file
from lingforge.models.config import RunConfig
from lingforge.models.enums import Label, ModelKind, Protocol, StatsLevel
from lingforge.models.features import FeatureMatrix
from lingforge.models.results import AssociationResult, ImportanceEntry
from lingforge.pos.annotate import TaggingReport, annotate_corpus, check_quality_gate
from lingforge.pos.mapping import MorMappingTable
from lingforge.stats.association import (
    association_table,
    write_association_table,
    write_plot_data,
)
from lingforge.stats.consistency import importance_consistency, ranking_overlap
from lingforge.stats.nonparametric import EXACT_MAX_CELLS

logger = logging.getLogger(__name__)

MANIFEST_FORMAT = "lingforge-manifest/1"
EXPERIMENT_FORMAT = "lingforge-experiment/1"
STATS_FORMAT = "lingforge-stats/1"


# =============================================================================
# Paths
# =============================================================================


def manifest_path(config: RunConfig) -> Path:
    return config.out_path / "manifest.json"


def features_dir(config: RunConfig) -> Path:
    return config.out_path / "features"


def experiment_name(config: RunConfig) -> str:
    return f"{config.representation}_{config.model}_{config.protocol}"


def experiment_path(config: RunConfig) -> Path:
    return config.out_path / "experiments" / f"{experiment_name(config)}.json"


def stats_paths(config: RunConfig) -> tuple[Path, Path, Path]:
    """Association table, plot data and sidecar for the configured level."""
    base = config.out_path / "stats" / f"{config.representation}_{config.stats_level}"
    return (
        base.with_name(base.name + ".csv"),
        base.with_name(base.name + "_plot.csv"),
        base.with_name(base.name + ".meta.json"),
    )


def _stage_hashes(config: RunConfig, *stages: str) -> dict[str, str]:
    return {stage: config.stage_hash(stage) for stage in stages}


def _require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise MissingArtifact(f"{path} not found; run `lingforge {stage}` first")
    return path


# =============================================================================
# Ingest
# =============================================================================


def run_ingest(config: RunConfig) -> dict[str, Any]:
    """Load, clean and persist the corpus.

    Returns:
        The manifest document that was written.

    Raises:
        ConfigError: If no input directory is configured.
        EmptyCorpus: If no transcript loads.
        UnparseableFiles: If a file fails and ``skip_bad`` is off.
    """
    if not config.input_dir:
        raise ConfigError("ingest needs an input directory (input_dir / --input)")
    manifest = LabelManifest.from_csv(config.label_manifest) if config.label_manifest else None
    load = load_corpus(
        config.input_dir,
        config.cleaning_policy,
        manifest,
        threads=config.threads,
        skip_bad=config.skip_bad,
    )
    ingest_hash = config.stage_hash("ingest")
    entries = []
    for transcript in load.transcripts:
        relative = Path("transcripts") / Path(transcript.source_path).with_suffix(".tok")
        write_transcript_file(transcript, config.out_path / relative, ingest_hash)
        entries.append(
            {
                "path": relative.as_posix(),
                "source_path": transcript.source_path,
                "subject_id": transcript.subject_id,
                "session_id": transcript.session_id,
                "label": transcript.label.value,
                "utterances": len(transcript.utterances),
                "tokens": transcript.num_tokens(),
            }
        )
    document = _manifest_document(config, load, entries)
    write_json(manifest_path(config), document)
    logger.info(
        "Ingested %d transcripts (%d skipped) into %s",
        len(entries),
        len(load.failures),
        config.out_path,
    )
    return document


def _manifest_document(
    config: RunConfig, load: CorpusLoad, entries: list[dict[str, Any]]
) -> dict[str, Any]:
    counts = load.label_counts()
    return {
        "format": MANIFEST_FORMAT,
        "lingforge_version": __version__,
        "stage_hashes": _stage_hashes(config, "ingest"),
        "config": config.to_dict(),
        "counts": {label.value: counts[label] for label in Label},
        "n_transcripts": len(load.transcripts),
        "n_subjects": load.subject_count(),
        "transcripts": entries,
        "failures": [{"path": path, "error": message} for path, message in load.failures],
    }


def read_manifest(config: RunConfig) -> dict[str, Any]:
    """Read the manifest and check it matches the current cleaning settings."""
    document = read_json(_require(manifest_path(config), "ingest"))
    check_stage_hash(
        document.get("stage_hashes", {}), "ingest", config.stage_hash("ingest"), "Corpus manifest"
    )
    return document


# =============================================================================
# Features
# =============================================================================


@dataclass(frozen=True)
class FeatureStageResult:
    matrix: FeatureMatrix
    tagging: TaggingReport
    csv_path: Path
    meta_path: Path


def run_features(config: RunConfig) -> FeatureStageResult:
    """Annotate persisted transcripts and write the feature matrix.

    Raises:
        MissingArtifact: If ingest has not run.
        ArtifactMismatch: If the transcripts were cleaned under other settings.
        AnnotationError: When tags are missing or the quality gate fails.
    """
    manifest = read_manifest(config)
    reader = ReaderFactory.create("tokens", expected_hash=config.stage_hash("ingest"))
    transcripts = [
        reader.read(_require(config.out_path / entry["path"], "ingest"))
        for entry in manifest["transcripts"]
    ]

    table = MorMappingTable.load_bundled()
    tagged, report = annotate_corpus(
        transcripts,
        table,
        tag_dir=config.tag_dir,
        strict=config.strict,
        min_mor_coverage=config.min_mor_coverage,
        threads=config.threads,
    )
    check_quality_gate(report, config.quality_gate_x_rate)
    matrix = build_feature_matrix(
        tagged,
        config.representation,
        window=config.mattr_window,
        include_propn=config.include_propn,
        threads=config.threads,
    )
    meta = {
        "stage_hashes": _stage_hashes(config, "ingest", "features"),
        "config": config.to_dict(),
        "mor_table": table.version,
        "tagging": report.to_dict(),
    }
    csv_path, meta_path = write_feature_matrix(matrix, features_dir(config), meta)
    return FeatureStageResult(matrix, report, csv_path, meta_path)


def read_matrix(config: RunConfig) -> tuple[FeatureMatrix, dict[str, Any]]:
    """Read the configured representation's matrix and check its hashes."""
    csv_path, _ = _matrix_files(config)
    _require(csv_path, "features")
    matrix, meta = read_feature_matrix(features_dir(config), config.representation)
    hashes = meta.get("stage_hashes", {})
    check_stage_hash(hashes, "ingest", config.stage_hash("ingest"), "Feature matrix")
    check_stage_hash(hashes, "features", config.stage_hash("features"), "Feature matrix")
    return matrix, meta


def _matrix_files(config: RunConfig) -> tuple[Path, Path]:
    return matrix_paths(features_dir(config), config.representation)


# =============================================================================
# Experiment
# =============================================================================


def run_experiment_stage(config: RunConfig) -> ExperimentResult:
    """Run the configured protocol and persist metrics, importance and models."""
    matrix, _ = read_matrix(config)
    result = run_experiment(matrix, config)
    counts = matrix.label_counts()
    document = {
        "format": EXPERIMENT_FORMAT,
        "stage_hashes": _stage_hashes(config, "ingest", "features", "experiment"),
        "config": config.to_dict(),
        "corpus": {
            "rows": len(matrix.rows),
            "subjects": len(set(matrix.subject_ids())),
            "counts": {label.value: counts[label] for label in Label},
        },
        "result": result.to_dict(),
    }
    write_json(experiment_path(config), document)

    models_dir = config.out_path / "models"
    name = experiment_name(config)
    if len(result.folds) == 1:
        write_model(result.folds[0].model, models_dir / f"{name}.json")
    else:
        for fold in result.folds:
            write_model(fold.model, models_dir / f"{name}_fold{fold.plan.fold_id}.json")
    return result


# =============================================================================
# Statistics
# =============================================================================


def run_stats(config: RunConfig) -> list[AssociationResult]:
    """Write the association table, plot data and sidecar for the configured level."""
    matrix, _ = read_matrix(config)
    results = association_table(
        matrix, config.stats_level, config.subject_aggregate, threads=config.threads
    )
    table_path, plot_path, meta_path = stats_paths(config)
    write_association_table(results, table_path)
    write_plot_data(results, plot_path)
    write_json(
        meta_path,
        {
            "format": STATS_FORMAT,
            "stage_hashes": _stage_hashes(config, "ingest", "features", "stats"),
            "config": config.to_dict(),
            "level": config.stats_level.value,
            "representation": config.representation.value,
            "table": table_path.name,
            "plot_data": plot_path.name,
            "results": [r.to_dict() for r in results],
        },
    )
    return results


# =============================================================================
# Synthetic corpus
# =============================================================================


def run_synth(out_dir: str | Path, synth: SynthConfig) -> list[Path]:
    return write_synthetic_corpus(out_dir, synth)


# =============================================================================
# Report
# =============================================================================


@dataclass
class ExperimentReport:
    """Everything the human-readable report assembles.

    Attributes:
        config: Config echo.
        manifest: Corpus manifest, None when ingest has not run.
        features_meta: Feature sidecars by representation.
        experiments: Experiment documents in file-name order.
        stats: Stats sidecars in file-name order.
        gaps: Missing or skipped inputs, one message each.
    """

    config: RunConfig
    manifest: dict[str, Any] | None = None
    features_meta: dict[str, dict[str, Any]] = field(default_factory=dict)
    experiments: list[dict[str, Any]] = field(default_factory=list)
    stats: list[dict[str, Any]] = field(default_factory=list)
    gaps: list[str] = field(default_factory=list)

    def to_markdown(self) -> str:
        return _render_report(self)


def collect_report(config: RunConfig) -> ExperimentReport:
    """Gather persisted artifacts, recording each missing one as a gap.

    Raises:
        ArtifactMismatch: If an artifact was produced under different
            cleaning or feature settings.
    """
    report = ExperimentReport(config)
    out = config.out_path
    if manifest_path(config).exists():
        report.manifest = read_manifest(config)
    else:
        report.gaps.append("Corpus manifest missing (run `lingforge ingest`)")

    for meta_path in sorted((out / "features").glob("*.meta.json")):
        meta = read_json(meta_path)
        _check_upstream(config, meta, meta_path)
        report.features_meta[meta["representation"]] = meta
    if not report.features_meta:
        report.gaps.append("No feature matrix (run `lingforge features`)")

    for path in sorted((out / "experiments").glob("*.json")):
        document = read_json(path)
        _check_upstream(config, document, path)
        document["_file"] = path.name
        report.experiments.append(document)
    if not report.experiments:
        report.gaps.append("No experiment results (run `lingforge experiment`)")

    for path in sorted((out / "stats").glob("*.meta.json")):
        document = read_json(path)
        _check_upstream(config, document, path)
        report.stats.append(document)
    if not report.stats:
        report.gaps.append("No association tables (run `lingforge stats`)")
    return report


def _check_upstream(config: RunConfig, document: dict[str, Any], path: Path) -> None:
    hashes = document.get("stage_hashes", {})
    representation = document.get("representation") or document.get("config", {}).get(
        "representation"
    )
    expected = config
    if representation:
        expected = config.with_overrides(representation=representation)
    for stage in ("ingest", "features"):
        if stage in hashes and hashes[stage] != expected.stage_hash(stage):
            raise ArtifactMismatch(
                f"{path} was produced under a different {stage} configuration; "
                "rerun the stages or use a separate --out-dir"
            )


def run_report(config: RunConfig) -> tuple[ExperimentReport, Path]:
    """Assemble ``report.md`` from persisted artifacts.

    Gaps are logged as warnings; under ``strict`` they raise.

    Raises:
        ReportIncomplete: With ``strict`` and at least one gap.
    """
    report = collect_report(config)
    for gap in report.gaps:
        logger.warning("Report gap: %s", gap)
    if config.strict and report.gaps:
        raise ReportIncomplete("Report inputs missing:\n  " + "\n  ".join(report.gaps))
    path = config.out_path / "report.md"
    atomic_write_text(path, report.to_markdown())
    return report, path


# =============================================================================
# Report rendering
# =============================================================================


def _fmt(value: float | None, std: float | None = None) -> str:
    if value is None:
        return "-"
    return f"{value:.3f}" if std is None else f"{value:.3f} ± {std:.3f}"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return lines


def _headline(result: dict[str, Any], name: str) -> str:
    aggregate = result.get("aggregate")
    if aggregate:
        return _fmt(aggregate["metric_mean"][name], aggregate["metric_std"][name])
    return _fmt(result["folds"][0]["metrics"][name])


def _ranked_importance(result: dict[str, Any]) -> list[ImportanceEntry]:
    aggregate = result.get("aggregate")
    if aggregate:
        kind = ModelKind(result["model_kind"])
        return [
            ImportanceEntry(
                s["feature"],
                s["mean"],
                None if kind is ModelKind.FOREST else (s["mean"] > 0) - (s["mean"] < 0),
            )
            for s in aggregate["importance"]
        ]
    return [
        ImportanceEntry(e["feature"], e["score"], e.get("sign"))
        for e in result["folds"][0]["importance"]["entries"]
    ]


def _render_report(report: ExperimentReport) -> str:
    config = report.config
    lines = ["# lingforge report", ""]

    lines += ["## Corpus", ""]
    if report.manifest:
        counts = report.manifest["counts"]
        lines += _table(
            ["Group", "Transcripts"],
            [
                ["Control", str(counts["control"])],
                ["Dementia", str(counts["dementia"])],
                ["Total", str(report.manifest["n_transcripts"])],
            ],
        )
        lines += ["", f"Subjects: {report.manifest['n_subjects']}", ""]
    else:
        lines += ["_Not available._", ""]

    lines += ["## Model comparison", ""]
    if report.experiments:
        rows = []
        for doc in report.experiments:
            result = doc["result"]
            rows.append(
                [
                    result["representation"],
                    result["model_kind"],
                    result["protocol"],
                    *(
                        _headline(result, name)
                        for name in ("accuracy", "macro_precision", "macro_recall", "macro_f1")
                    ),
                ]
            )
        lines += _table(
            ["Representation", "Model", "Protocol", "Accuracy", "Precision (macro)",
             "Recall (macro)", "F1 (macro)"],
            rows,
        )
        lines.append("")
        for doc in report.experiments:
            lines += _render_experiment(doc)
        lines += _render_overlaps(report)
    else:
        lines += ["_Not available._", ""]

    lines += ["## Group comparisons", ""]
    if report.stats:
        for doc in report.stats:
            lines += _render_stats(doc, config.alpha)
        lines += _render_consistency(report)
    else:
        lines += ["_Not available._", ""]

    lines += _render_ledger(report)

    lines += ["## Gaps", ""]
    if report.gaps:
        lines += [f"- {gap}" for gap in report.gaps]
    else:
        lines.append("None.")
    lines.append("")
    return "\n".join(lines)


def _render_experiment(doc: dict[str, Any]) -> list[str]:
    result = doc["result"]
    lines = [f"### {doc['_file']}", ""]
    aggregate = result.get("aggregate")
    if aggregate:
        rows = [
            [str(i), *(_fmt(fold["metrics"][name]) for name in ("accuracy", "macro_f1"))]
            for i, fold in enumerate(result["folds"])
        ]
        lines += _table(["Fold", "Accuracy", "F1 (macro)"], rows)
        lines.append("")
        importance_rows = [
            [s["feature"], _fmt(s["mean"], s["std"]), str(s["n_folds_present"])]
            for s in aggregate["importance"]
        ]
        lines += _table(["Feature", "Importance", "Folds"], importance_rows)
    else:
        confusion = result["folds"][0]["metrics"]["confusion"]
        lines.append(f"Confusion (rows true control/dementia): {confusion}")
        lines.append("")
        importance_rows = [
            [e["feature"], _fmt(e["score"])]
            for e in result["folds"][0]["importance"]["entries"]
        ]
        lines += _table(["Feature", "Importance"], importance_rows)
    lines.append("")
    return lines


def _render_overlaps(report: ExperimentReport) -> list[str]:
    by_setting: dict[tuple[str, str], dict[str, dict[str, Any]]] = {}
    for doc in report.experiments:
        result = doc["result"]
        key = (result["representation"], result["protocol"])
        by_setting.setdefault(key, {})[result["model_kind"]] = result
    rows = []
    for (representation, protocol), models in sorted(by_setting.items()):
        if ModelKind.LOGISTIC.value in models and ModelKind.FOREST.value in models:
            lr = [e.feature for e in _ranked_importance(models[ModelKind.LOGISTIC.value])]
            rf = [e.feature for e in _ranked_importance(models[ModelKind.FOREST.value])]
            overlap = ranking_overlap(lr, rf, report.config.top_k)
            rows.append(
                [
                    representation,
                    protocol,
                    str(len(overlap.shared)),
                    _fmt(overlap.jaccard),
                    ", ".join(overlap.shared[:10]) or "-",
                ]
            )
    if not rows:
        return []
    return [
        "### Ranking overlap (LR vs RF)",
        "",
        *_table(["Representation", "Protocol", "Shared", "Jaccard", "Shared features"], rows),
        "",
    ]


def _render_stats(doc: dict[str, Any], alpha: float) -> list[str]:
    results = [AssociationResult.from_dict(r) for r in doc["results"]]
    significant = sum(1 for r in results if r.p_adjusted < alpha)
    lines = [
        f"### {doc['representation']} ({doc['level']} level)",
        "",
        f"Table: `stats/{doc['table']}`; plot data: `stats/{doc['plot_data']}`. "
        f"{significant}/{len(results)} features with p_adj < {alpha}.",
        "",
    ]
    rows = [
        [
            r.feature_name,
            _fmt(r.mean_control),
            _fmt(r.mean_dementia),
            _fmt(r.cliffs_delta),
            f"{r.p_value:.3g}",
            f"{r.p_adjusted:.3g}",
            str(r.magnitude),
        ]
        for r in results
    ]
    lines += _table(
        ["Feature", "Mean Control", "Mean Dementia", "Cliff's δ", "p-value", "p_adj", "Effect"],
        rows,
    )
    lines.append("")
    return lines


def _render_consistency(report: ExperimentReport) -> list[str]:
    lines: list[str] = []
    for doc in report.experiments:
        result = doc["result"]
        if result["model_kind"] != ModelKind.LOGISTIC.value:
            continue
        preferred = (
            StatsLevel.SUBJECT if result["protocol"] == Protocol.SUBJECT_CV.value
            else StatsLevel.TRANSCRIPT
        )
        candidates = [s for s in report.stats if s["representation"] == result["representation"]]
        if not candidates:
            continue
        chosen = next((s for s in candidates if s["level"] == preferred.value), candidates[0])
        rows = importance_consistency(
            _ranked_importance(result),
            [AssociationResult.from_dict(r) for r in chosen["results"]],
            report.config.alpha,
        )
        agreeing = sum(1 for r in rows if r.direction_agrees)
        signed = sum(1 for r in rows if r.direction_agrees is not None)
        lines.append(
            f"- {doc['_file']} vs {chosen['level']}-level table: "
            f"{sum(1 for r in rows if r.significant)}/{len(rows)} top features significant, "
            f"coefficient direction agrees with δ for {agreeing}/{signed}"
        )
    if not lines:
        return []
    return ["### Importance vs group differences", "", *lines, ""]


def _render_ledger(report: ExperimentReport) -> list[str]:
    config = report.config
    lines = ["## Assumptions", ""]
    mor_tables = sorted({m.get("mor_table", "?") for m in report.features_meta.values()})
    lines += [
        "- Tagger: %mor codes mapped to universal tags with table "
        f"{', '.join(mor_tables) or MorMappingTable.load_bundled().version}"
        + (f"; external tag files from `{config.tag_dir}`" if config.tag_dir else ""),
        "- PUNCT: utterance terminators only; the raw stream excludes them",
        "- Semantic coherence: mean cosine of adjacent utterances' content-word counts; "
        "MISSING without adjacent pairs",
        f"- MATTR window {config.mattr_window}; PROPN counted as content: {config.include_propn}",
        f"- Logistic λ={config.l2_strength} (bias unpenalized, balanced class weights); "
        f"forest {config.n_trees} trees, min_leaf {config.min_leaf}, "
        f"max_depth {config.max_depth or 'none'}",
        f"- Quality gate: X-rate ≤ {config.quality_gate_x_rate}; "
        f"%mor coverage ≥ {config.min_mor_coverage}",
        f"- Mann-Whitney exact when m·n ≤ {EXACT_MAX_CELLS} without ties; "
        "otherwise normal approximation with tie and continuity correction",
        "- Stratified test counts: round(count × fraction) with halves up; grouped folds "
        "assign subjects largest-first to the lightest fold; fold std uses n−1",
        f"- Subject-level statistics aggregate transcripts by {config.subject_aggregate}; "
        f"α = {config.alpha}",
        "",
    ]
    tagging = [
        (representation, meta["tagging"])
        for representation, meta in sorted(report.features_meta.items())
        if "tagging" in meta
    ]
    skipped = report.manifest.get("failures", []) if report.manifest else []
    if tagging or skipped:
        lines += ["### Tagging and cleaning differences", ""]
        for representation, t in tagging:
            unknown = ", ".join(t["unknown_categories"]) or "none"
            lines.append(
                f"- {representation}: X-rate {t['x_rate']:.2%}, "
                f"{len(t['misaligned'])} misaligned utterances, "
                f"{t['external']} transcripts from tag files, unknown MOR categories: {unknown}"
            )
        for failure in skipped:
            lines.append(f"- skipped {failure['path']}: {failure['error']}")
        lines.append("")
    return lines


