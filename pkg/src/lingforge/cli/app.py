"""Main CLI application for lingforge.

Each command runs one pipeline stage against the artifacts under ``--out-dir``.

Commands:
    ingest: Parse and clean a CHAT corpus
    features: Tag transcripts and build a feature matrix
    experiment: Train and evaluate a classifier
    stats: Compare feature distributions between groups
    report: Assemble a Markdown report from stage outputs
    synth: Write a synthetic labeled corpus

Example:
    $ lingforge --out-dir out synth corpus --subjects 100
    $ lingforge --out-dir out ingest --input corpus
    $ lingforge --out-dir out features --representation pos_enhanced
    $ lingforge --out-dir out experiment --model rf --protocol subject_cv
    $ lingforge --out-dir out stats --level subject
    $ lingforge --out-dir out report
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Any

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from lingforge import __version__
from lingforge.cli.formatters import OutputFormat, get_formatter
from lingforge.errors import ConfigError, LingforgeError
from lingforge.models.config import RunConfig

app = typer.Typer(
    name="lingforge",
    help="Linguistic feature pipeline for clinical CHAT transcripts.",
    add_completion=False,
)

console = Console()
error_console = Console(stderr=True)

FORMAT_HELP = "Output format: table, json, summary, or markdown."


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        from importlib.metadata import PackageNotFoundError, version

        try:
            v = version("lingforge")
        except PackageNotFoundError:
            v = __version__
        console.print(f"lingforge version {v}")
        raise typer.Exit()


def configure_logging(verbose: int) -> None:
    """Route ``lingforge`` logs to stderr through Rich; -v INFO, -vv DEBUG."""
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logger = logging.getLogger("lingforge")
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)
    handler = RichHandler(console=error_console, show_path=False, show_time=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False


@contextmanager
def stage_errors(verbose: int = 0) -> Iterator[None]:
    """Print typed errors and exit with their code."""
    try:
        yield
    except LingforgeError as e:
        error_console.print(f"[red]Error:[/red] {escape(str(e))}")
        raise typer.Exit(e.exit_code) from None
    except FileNotFoundError as e:
        error_console.print(f"[red]Error:[/red] {escape(str(e))}")
        raise typer.Exit(2) from None
    except typer.Exit:
        raise
    except Exception as e:
        error_console.print(f"[red]Error:[/red] {escape(str(e))}")
        if verbose >= 3:
            import traceback

            error_console.print(traceback.format_exc())
        raise typer.Exit(1) from None


def _state(ctx: typer.Context) -> tuple[RunConfig, int]:
    return ctx.obj["config"], ctx.obj["verbose"]


def _output_format(format: str) -> OutputFormat:
    try:
        return OutputFormat(format.lower())
    except ValueError:
        raise ConfigError(
            f"Invalid format '{format}'. Valid options: {[f.value for f in OutputFormat]}"
        ) from None


def _emit(text: str, output: Path | None) -> None:
    if output:
        output.write_text(text, encoding="utf-8")
    else:
        console.print(text, markup=False, highlight=False, soft_wrap=True)


@app.callback()
def main_callback(
    ctx: typer.Context,
    config: Annotated[
        Path | None,
        typer.Option("--config", "-c", help="Key-value config file.", dir_okay=False),
    ] = None,
    seed: Annotated[int | None, typer.Option("--seed", help="Master random seed.")] = None,
    out_dir: Annotated[
        Path | None, typer.Option("--out-dir", "-o", help="Artifact directory.")
    ] = None,
    threads: Annotated[
        int | None, typer.Option("--threads", "-j", help="Worker threads per stage.")
    ] = None,
    strict: Annotated[
        bool,
        typer.Option("--strict", help="Treat alignment failures and report gaps as errors."),
    ] = False,
    verbose: Annotated[
        int,
        typer.Option("--verbose", "-v", count=True, help="Increase verbosity (-v, -vv)."),
    ] = 0,
    version: Annotated[
        bool | None,
        typer.Option(
            "--version",
            "-V",
            callback=version_callback,
            is_eager=True,
            help="Show version and exit.",
        ),
    ] = None,
) -> None:
    """Linguistic feature pipeline for clinical CHAT transcripts.

    Settings come from defaults, then --config, then command-line flags.

    Examples:

        $ lingforge -o out synth corpus

        $ lingforge -o out ingest --input corpus

        $ lingforge -o out --seed 7 experiment --protocol subject_cv
    """
    configure_logging(verbose)
    with stage_errors(verbose):
        run_config = RunConfig.from_file(config) if config else RunConfig()
        run_config = run_config.with_overrides(
            seed=seed,
            out_dir=str(out_dir) if out_dir else None,
            threads=threads,
            strict=True if strict else None,
        )
    ctx.obj = {"config": run_config, "verbose": verbose}


@app.command()
def ingest(
    ctx: typer.Context,
    input_dir: Annotated[
        Path | None,
        typer.Option("--input", "-i", help="Corpus root (label subdirectories).", file_okay=False),
    ] = None,
    manifest: Annotated[
        Path | None, typer.Option("--manifest", help="CSV of key,label overrides.")
    ] = None,
    skip_bad: Annotated[
        bool, typer.Option("--skip-bad", help="Skip unparseable files instead of failing.")
    ] = False,
    fillers: Annotated[
        bool | None, typer.Option("--fillers/--no-fillers", help="Keep filled pauses.")
    ] = None,
    repetitions: Annotated[
        bool | None,
        typer.Option("--repetitions/--no-repetitions", help="Keep repeated material."),
    ] = None,
    retracings: Annotated[
        bool | None,
        typer.Option("--retracings/--no-retracings", help="Keep retraced material."),
    ] = None,
    speaker: Annotated[
        str | None, typer.Option("--speaker", help="Target speaker code (default PAR).")
    ] = None,
    format: Annotated[str, typer.Option("--format", "-f", help=FORMAT_HELP)] = "table",
) -> None:
    """Parse, clean and persist a CHAT corpus.

    Examples:

        $ lingforge -o out ingest --input pitt

        $ lingforge -o out ingest --input pitt --skip-bad --no-fillers
    """
    from lingforge.pipeline import run_ingest

    base, verbose = _state(ctx)
    with stage_errors(verbose):
        output_format = _output_format(format)
        config = base.with_overrides(
            input_dir=str(input_dir) if input_dir else None,
            label_manifest=str(manifest) if manifest else None,
            skip_bad=True if skip_bad else None,
            keep_fillers=fillers,
            keep_repetitions=repetitions,
            keep_retracings=retracings,
            target_speaker=speaker,
        )
        document = run_ingest(config)
        _emit(get_formatter(output_format).format_manifest(document), None)


@app.command()
def features(
    ctx: typer.Context,
    representation: Annotated[
        str | None,
        typer.Option("--representation", "-r", help="raw, pos_enhanced or pos_only."),
    ] = None,
    tag_dir: Annotated[
        Path | None, typer.Option("--tag-dir", help="External .tags files replacing %mor.")
    ] = None,
    mattr_window: Annotated[
        int | None, typer.Option("--mattr-window", help="MATTR window length.")
    ] = None,
    format: Annotated[str, typer.Option("--format", "-f", help=FORMAT_HELP)] = "table",
) -> None:
    """Tag transcripts and write the feature matrix.

    Examples:

        $ lingforge -o out features -r pos_only

        $ lingforge -o out features --tag-dir tags -f json
    """
    from lingforge.pipeline import run_features

    base, verbose = _state(ctx)
    with stage_errors(verbose):
        output_format = _output_format(format)
        config = base.with_overrides(
            representation=representation,
            tag_dir=str(tag_dir) if tag_dir else None,
            mattr_window=mattr_window,
        )
        stage = run_features(config)
        _emit(get_formatter(output_format).format_features(stage), None)


@app.command()
def experiment(
    ctx: typer.Context,
    model: Annotated[str | None, typer.Option("--model", "-m", help="lr or rf.")] = None,
    protocol: Annotated[
        str | None,
        typer.Option("--protocol", "-p", help="transcript_split or subject_cv."),
    ] = None,
    representation: Annotated[
        str | None, typer.Option("--representation", "-r", help="Feature representation.")
    ] = None,
    folds: Annotated[int | None, typer.Option("--folds", help="Grouped CV folds.")] = None,
    test_fraction: Annotated[
        float | None, typer.Option("--test-fraction", help="Transcript split test share.")
    ] = None,
    top_k: Annotated[int | None, typer.Option("--top-k", help="Importance rows kept.")] = None,
    format: Annotated[str, typer.Option("--format", "-f", help=FORMAT_HELP)] = "table",
    output: Annotated[
        Path | None, typer.Option("--output", help="Write the summary to a file.")
    ] = None,
) -> None:
    """Train and evaluate a classifier on the feature matrix.

    Examples:

        $ lingforge -o out experiment --model lr --protocol transcript_split

        $ lingforge -o out experiment -m rf -p subject_cv --folds 5 -f summary
    """
    from lingforge.pipeline import run_experiment_stage

    base, verbose = _state(ctx)
    with stage_errors(verbose):
        output_format = _output_format(format)
        config = base.with_overrides(
            model=model,
            protocol=protocol,
            representation=representation,
            folds=folds,
            test_fraction=test_fraction,
            top_k=top_k,
        )
        result = run_experiment_stage(config)
        _emit(get_formatter(output_format).format_experiment(result), output)


@app.command()
def stats(
    ctx: typer.Context,
    level: Annotated[
        str | None, typer.Option("--level", "-l", help="transcript or subject.")
    ] = None,
    representation: Annotated[
        str | None, typer.Option("--representation", "-r", help="Feature representation.")
    ] = None,
    aggregate: Annotated[
        str | None, typer.Option("--aggregate", help="Subject aggregation: mean or median.")
    ] = None,
    format: Annotated[str, typer.Option("--format", "-f", help=FORMAT_HELP)] = "table",
    output: Annotated[
        Path | None, typer.Option("--output", help="Write the summary to a file.")
    ] = None,
) -> None:
    """Mann-Whitney U, Cliff's delta and BH-adjusted p per feature.

    Examples:

        $ lingforge -o out stats

        $ lingforge -o out stats --level subject -f markdown
    """
    from lingforge.pipeline import run_stats

    base, verbose = _state(ctx)
    with stage_errors(verbose):
        output_format = _output_format(format)
        config = base.with_overrides(
            stats_level=level, representation=representation, subject_aggregate=aggregate
        )
        results = run_stats(config)
        _emit(get_formatter(output_format).format_stats(results), output)


@app.command()
def report(ctx: typer.Context) -> None:
    """Assemble report.md from the stage outputs under --out-dir.

    Missing inputs are listed as gaps; with --strict they fail the command.

    Examples:

        $ lingforge -o out report

        $ lingforge -o out --strict report
    """
    from lingforge.pipeline import run_report

    config, verbose = _state(ctx)
    with stage_errors(verbose):
        assembled, path = run_report(config)
        if assembled.gaps:
            error_console.print(
                f"[yellow]Warning:[/yellow] report has {len(assembled.gaps)} gap(s)"
            )
        console.print(f"Report written to {path}", soft_wrap=True)


@app.command()
def synth(
    ctx: typer.Context,
    output_dir: Annotated[Path, typer.Argument(help="Directory receiving the corpus.")],
    subjects: Annotated[int, typer.Option("--subjects", help="Number of subjects.")] = 100,
    sessions: Annotated[int, typer.Option("--sessions", help="Sessions per subject.")] = 2,
    effect_scale: Annotated[
        float, typer.Option("--effect-scale", help="Group difference strength, 0 to 1.5.")
    ] = 1.0,
) -> None:
    """Write a synthetic labeled CHAT corpus with %mor tiers.

    Half the subjects are controls. The output is determined by --seed.

    Examples:

        $ lingforge --seed 7 synth corpus --subjects 40 --sessions 1
    """
    from lingforge.corpus.synth import SynthConfig
    from lingforge.pipeline import run_synth

    config, verbose = _state(ctx)
    with stage_errors(verbose):
        synth_config = SynthConfig(
            subjects=subjects, sessions=sessions, effect_scale=effect_scale, seed=config.seed
        )
        written = run_synth(output_dir, synth_config)
        console.print(f"Wrote {len(written)} transcripts to {output_dir}", soft_wrap=True)


def run(args: list[str] | None = None) -> int:
    """Invoke the app without Click's own exit handling; usage errors exit 64."""
    try:
        from typer import _click as click  # typer >= 0.26 vendors its own click
    except ImportError:
        import click

    try:
        result: Any = app(args=args, standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show(file=error_console.file)
        return ConfigError.exit_code
    except click.exceptions.Abort:
        error_console.print("Aborted.")
        return 1
    except click.exceptions.ClickException as e:
        e.show(file=error_console.file)
        return e.exit_code
    return result if isinstance(result, int) else 0
