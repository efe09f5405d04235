"""Labeled trace corpora: manifest ingestion, loading, and splitting.

A corpus is declared by a CSV manifest with the exact header
``path,category`` and one ``<log path>,<category>`` line per sample.
Category tokens are matched case-insensitively against the five labels
(benign, adware, ransomware, scareware, smsmalware). Paths may be
absolute or relative to the manifest's own directory.
"""

from __future__ import annotations

import csv
import enum
import io
import random
from dataclasses import dataclass
from pathlib import Path

from .strace_log import StraceParseError, TraceSummary, parse_summary, validate_summary

MANIFEST_HEADER = ("path", "category")

DETECTION_POSITIVE = "malware"
DETECTION_NEGATIVE = "benign"


class Category(enum.Enum):
    BENIGN = "benign"
    ADWARE = "adware"
    RANSOMWARE = "ransomware"
    SCAREWARE = "scareware"
    SMSMALWARE = "smsmalware"

    @property
    def is_malware(self) -> bool:
        return self is not Category.BENIGN

    @property
    def detection_label(self) -> str:
        return DETECTION_POSITIVE if self.is_malware else DETECTION_NEGATIVE

    @classmethod
    def from_token(cls, token: str) -> "Category":
        normalized = token.strip().lower()
        for member in cls:
            if member.value == normalized:
                return member
        raise UnknownCategory(f"unknown category token {token!r}")


class ManifestError(Exception):
    """Manifest document cannot be interpreted."""


class BadHeader(ManifestError):
    pass


class UnknownCategory(ManifestError):
    pass


class DuplicatePath(ManifestError):
    pass


class EmptyManifest(ManifestError):
    pass


class CorpusError(Exception):
    pass


class AllFilesFailed(CorpusError):
    def __init__(self, failures):
        super().__init__(f"all {len(failures)} manifest entries failed to load")
        self.failures = failures


class DegenerateFraction(CorpusError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    category: Category


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[ManifestEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Sample:
    id: str
    category: Category
    summary: TraceSummary


@dataclass(frozen=True)
class Corpus:
    samples: tuple[Sample, ...]

    def __post_init__(self):
        ids = [s.id for s in self.samples]
        if len(set(ids)) != len(ids):
            raise ValueError("corpus sample ids must be unique")

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def ids(self) -> list[str]:
        return [s.id for s in self.samples]

    def counts_by_category(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for sample in self.samples:
            counts[sample.category.value] = counts.get(sample.category.value, 0) + 1
        return counts


@dataclass(frozen=True)
class LoadFailure:
    path: str
    code: str
    detail: str

    def report_line(self) -> str:
        return f"{self.path}\t{self.code}\t{self.detail}"


def load_manifest(document: str) -> CorpusManifest:
    """Parse a manifest CSV document (not a path) into entries.

    Order is preserved; blank lines are skipped; category matching is
    case-insensitive. Raises BadHeader, UnknownCategory, DuplicatePath,
    or EmptyManifest.
    """
    reader = csv.reader(io.StringIO(document))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise BadHeader("manifest has no header line")
    header = tuple(cell.strip() for cell in rows[0])
    if header != MANIFEST_HEADER:
        raise BadHeader(f"manifest header must be 'path,category', got {','.join(header)!r}")

    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise BadHeader(f"line {lineno}: expected 2 fields, got {len(row)}")
        path, token = row[0].strip(), row[1]
        if not path:
            raise BadHeader(f"line {lineno}: empty path")
        if path in seen:
            raise DuplicatePath(f"line {lineno}: path {path!r} listed twice")
        seen.add(path)
        entries.append(ManifestEntry(path=path, category=Category.from_token(token)))
    if not entries:
        raise EmptyManifest("manifest lists no samples")
    return CorpusManifest(entries=tuple(entries))


def load_manifest_file(path: str | Path) -> tuple[CorpusManifest, Path]:
    """Read a manifest from disk; returns it plus the root for relative paths."""
    path = Path(path)
    return load_manifest(path.read_text(encoding="utf-8")), path.parent


def load_corpus(
    manifest: CorpusManifest,
    root: str | Path = ".",
    mode: str = "strict",
) -> tuple[Corpus, list[LoadFailure]]:
    """Load every manifest entry, collecting per-file failures.

    strict mode drops files that fail either the grammar or the
    arithmetic validation; lenient keeps arithmetic violators (useful
    for triaging corrupted corpora) but never grammar failures. Sample
    ids are the manifest paths verbatim. Raises AllFilesFailed if
    nothing survives.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"mode must be 'strict' or 'lenient', got {mode!r}")
    root = Path(root)
    samples: list[Sample] = []
    failures: list[LoadFailure] = []
    for entry in manifest.entries:
        target = Path(entry.path)
        if not target.is_absolute():
            target = root / target
        try:
            text = target.read_text(encoding="utf-8")
        except OSError as exc:
            failures.append(LoadFailure(entry.path, "io-error", str(exc)))
            continue
        try:
            summary = parse_summary(text)
        except StraceParseError as exc:
            failures.append(LoadFailure(entry.path, "parse-error", f"{type(exc).__name__}: {exc}"))
            continue
        violations = validate_summary(summary)
        if violations and mode == "strict":
            failures.append(
                LoadFailure(entry.path, "validation-error", "; ".join(str(v) for v in violations))
            )
            continue
        samples.append(Sample(id=entry.path, category=entry.category, summary=summary))
    if manifest.entries and not samples:
        raise AllFilesFailed(failures)
    return Corpus(samples=tuple(samples)), failures


def format_failure_report(failures: list[LoadFailure]) -> str:
    return "".join(f.report_line() + "\n" for f in failures)


def _round_half_up(x: float) -> int:
    return int(x + 0.5)


def stratified_split(
    corpus: Corpus, test_fraction: float, seed: int
) -> tuple[Corpus, Corpus]:
    """Per-category split into train/test with round-half-up allocation.

    Each category present is shuffled with the seeded generator and
    round(n * test_fraction) of its samples go to test, with a minimum
    of one test sample for categories of size >= 2. Membership is a pure
    function of (corpus, test_fraction, seed).
    """
    if not 0.0 < test_fraction < 1.0:
        raise DegenerateFraction(f"test fraction must be in (0, 1), got {test_fraction}")
    rng = random.Random(seed)
    test_ids: set[str] = set()
    for category in Category:
        ids = [s.id for s in corpus.samples if s.category is category]
        if not ids:
            continue
        rng.shuffle(ids)
        n_test = _round_half_up(len(ids) * test_fraction)
        if len(ids) >= 2:
            n_test = max(n_test, 1)
        n_test = min(n_test, len(ids))
        test_ids.update(ids[:n_test])
    return _materialize_split(corpus, test_ids)


def uniform_split(corpus: Corpus, test_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Unstratified variant: one global shuffle, same rounding rule."""
    if not 0.0 < test_fraction < 1.0:
        raise DegenerateFraction(f"test fraction must be in (0, 1), got {test_fraction}")
    ids = corpus.ids()
    rng = random.Random(seed)
    rng.shuffle(ids)
    n_test = min(max(_round_half_up(len(ids) * test_fraction), 1), max(len(ids) - 1, 0))
    return _materialize_split(corpus, set(ids[:n_test]))


def _materialize_split(corpus: Corpus, test_ids: set[str]) -> tuple[Corpus, Corpus]:
    train = tuple(s for s in corpus.samples if s.id not in test_ids)
    test = tuple(s for s in corpus.samples if s.id in test_ids)
    if not train or not test:
        raise DegenerateFraction(
            f"split left {len(train)} train / {len(test)} test samples"
        )
    return Corpus(samples=train), Corpus(samples=test)


# --- corpus directory layout used by the CLI ------------------------------
#
# <dir>/index.csv    id,category,file   (file is relative to <dir>)
# <dir>/logs/NNNN.log   raw log bytes, one per sample
# <dir>/failures.tsv    load-failure report (may be absent)


def write_corpus_dir(
    corpus: Corpus, failures: list[LoadFailure], out_dir: str | Path
) -> None:
    from .strace_log import render_summary

    out = Path(out_dir)
    (out / "logs").mkdir(parents=True, exist_ok=True)
    with open(out / "index.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "category", "file"])
        for i, sample in enumerate(corpus.samples):
            name = f"logs/{i:04d}.log"
            (out / name).write_text(render_summary(sample.summary), encoding="utf-8")
            writer.writerow([sample.id, sample.category.value, name])
    if failures:
        (out / "failures.tsv").write_text(format_failure_report(failures), encoding="utf-8")


def read_corpus_dir(corpus_dir: str | Path) -> Corpus:
    """Load a corpus previously written by write_corpus_dir.

    Grammar failures abort (the directory is presumed machine-written);
    arithmetic validation is not re-applied so leniently ingested
    corpora survive a round trip.
    """
    corpus_dir = Path(corpus_dir)
    index = corpus_dir / "index.csv"
    samples: list[Sample] = []
    with open(index, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["id", "category", "file"]:
            raise CorpusError(f"{index}: expected header 'id,category,file'")
        for row in reader:
            if not row:
                continue
            sample_id, token, name = row
            text = (corpus_dir / name).read_text(encoding="utf-8")
            samples.append(
                Sample(
                    id=sample_id,
                    category=Category.from_token(token),
                    summary=parse_summary(text),
                )
            )
    return Corpus(samples=tuple(samples))
