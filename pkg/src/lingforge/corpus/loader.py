"""Corpus loading: every ``.cha`` file under a root, parsed and cleaned."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from lingforge.corpus.identity import LabelManifest
from lingforge.errors import EmptyCorpus, LingforgeError, UnparseableFiles
from lingforge.io.factories import ReaderFactory
from lingforge.models.enums import Label
from lingforge.models.policy import CleaningPolicy
from lingforge.models.transcript import Transcript

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusLoad:
    """Outcome of :func:`load_corpus`.

    Attributes:
        root: Corpus root directory.
        transcripts: Cleaned transcripts in sorted path order.
        failures: ``(relative path, message)`` of files skipped under ``skip_bad``.
    """

    root: Path
    transcripts: tuple[Transcript, ...]
    failures: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def label_counts(self) -> dict[Label, int]:
        counts = {label: 0 for label in Label}
        for transcript in self.transcripts:
            counts[transcript.label] += 1
        return counts

    def subject_count(self) -> int:
        return len({t.subject_id for t in self.transcripts})


def find_chat_files(root: str | Path) -> list[Path]:
    """All ``.cha`` files under ``root``, sorted by relative POSIX path."""
    root = Path(root)
    files = [p for p in root.rglob("*") if p.is_file() and p.suffix.lower() == ".cha"]
    return sorted(files, key=lambda p: p.relative_to(root).as_posix())


def load_corpus(
    root: str | Path,
    policy: CleaningPolicy | None = None,
    manifest: LabelManifest | None = None,
    threads: int = 1,
    skip_bad: bool = False,
) -> CorpusLoad:
    """Load every ``.cha`` file under ``root``.

    Files are parsed in a thread pool; results keep sorted path order so the
    outcome does not depend on scheduling.

    Raises:
        EmptyCorpus: If the root holds no ``.cha`` file or none loads.
        UnparseableFiles: If any file fails and ``skip_bad`` is False.
    """
    root = Path(root)
    if not root.is_dir():
        raise EmptyCorpus(f"Input directory not found: {root}")
    policy = policy or CleaningPolicy()
    files = find_chat_files(root)
    if not files:
        raise EmptyCorpus(f"No .cha files under {root}")
    logger.info("Loading %d CHAT files from %s with %d thread(s)", len(files), root, threads)
    reader = ReaderFactory.create("chat", policy=policy, manifest=manifest, root=root)

    def load(path: Path) -> Transcript | tuple[str, str]:
        try:
            return reader.read(path)
        except (LingforgeError, OSError) as e:
            return path.relative_to(root).as_posix(), str(e)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        outcomes = list(pool.map(load, files))

    transcripts = [o for o in outcomes if isinstance(o, Transcript)]
    failures = [o for o in outcomes if not isinstance(o, Transcript)]
    if failures and not skip_bad:
        raise UnparseableFiles(failures)
    for path, message in failures:
        logger.warning("Skipping %s: %s", path, message)
    if not transcripts:
        raise EmptyCorpus(f"No usable transcripts under {root}")
    return CorpusLoad(root, tuple(transcripts), tuple(failures))
