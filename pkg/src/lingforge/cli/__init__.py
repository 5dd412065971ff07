"""Command-line interface for lingforge.

Commands:
    ingest, features, experiment, stats, report, synth

Exit codes:
    0 ok, 1 generic failure, 2 corpus error, 3 annotation quality gate,
    4 leakage guard, 5 statistics precondition, 64 usage or configuration.

Example:
    $ lingforge --out-dir out synth corpus
    $ lingforge --out-dir out ingest --input corpus
"""

from __future__ import annotations

import sys


def main() -> None:
    """Entry point registered in pyproject.toml."""
    from lingforge.cli.app import run

    sys.exit(run())


__all__ = ["main"]
