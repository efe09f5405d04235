"""Observed-syscall vocabulary and normalized call/error features.

The feature layout is two halves of equal width: index ``i`` holds the
call fraction of vocabulary name ``i`` (that syscall's calls divided by
the sample's total calls) and index ``|V| + i`` holds its error
fraction (errors divided by total errors). A sample with no errors gets
an all-zero error half; likewise for calls. Everything lands in [0, 1]
and each half sums to 1 whenever its denominator is positive and the
vocabulary covers the sample.

The vocabulary is the bytewise-sorted union of syscall names observed
in the corpus it was built from, so the layout is independent of sample
order. Names seen at inference time but absent from the vocabulary are
ignored; the denominators still use the sample's own totals, which
count all of its activity. The %time, seconds, and usecs/call columns
contribute nothing.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .corpus import Category, Corpus
from .strace_log import TraceSummary


class EmptyCorpus(Exception):
    pass


class MatrixFormatError(Exception):
    pass


@dataclass(frozen=True)
class Vocabulary:
    names: tuple[str, ...]

    def __post_init__(self):
        if list(self.names) != sorted(set(self.names), key=lambda n: n.encode()):
            raise ValueError("vocabulary names must be unique and bytewise sorted")

    def __len__(self) -> int:
        return len(self.names)

    @property
    def dimension(self) -> int:
        return 2 * len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def feature_names(self) -> list[str]:
        return [f"call:{n}" for n in self.names] + [f"err:{n}" for n in self.names]


@dataclass(frozen=True)
class FeatureMatrix:
    vocabulary: Vocabulary
    rows: np.ndarray  # (n_samples, 2 * |V|) float64
    ids: tuple[str, ...]
    labels: tuple[Category, ...]

    def __post_init__(self):
        if not (self.rows.shape[0] == len(self.ids) == len(self.labels)):
            raise ValueError("rows, ids, and labels must be aligned")
        if self.rows.shape[1] != self.vocabulary.dimension:
            raise ValueError("row width must equal the vocabulary dimension")

    def __len__(self) -> int:
        return self.rows.shape[0]


def build_vocabulary(corpus: Corpus) -> Vocabulary:
    """Bytewise-sorted union of all syscall names observed in the corpus."""
    if len(corpus) == 0:
        raise EmptyCorpus("cannot build a vocabulary from an empty corpus")
    names: set[str] = set()
    for sample in corpus:
        names.update(row.syscall for row in sample.summary.rows)
    return Vocabulary(names=tuple(sorted(names, key=lambda n: n.encode())))


def vectorize(summary: TraceSummary, vocabulary: Vocabulary) -> np.ndarray:
    """Encode one summary against a fixed vocabulary.

    Vocabulary names missing from the summary contribute zeros; summary
    names missing from the vocabulary are dropped (their counts still
    sit in the totals, so the remaining fractions are unchanged).
    """
    size = len(vocabulary)
    vector = np.zeros(2 * size)
    index = vocabulary.index
    total_calls = summary.total_calls
    total_errors = summary.total_errors
    for row in summary.rows:
        i = index.get(row.syscall)
        if i is None:
            continue
        if total_calls > 0:
            vector[i] = row.calls / total_calls
        if total_errors > 0:
            vector[size + i] = row.errors / total_errors
    return vector


def build_matrix(corpus: Corpus, vocabulary: Vocabulary) -> FeatureMatrix:
    """One feature row per sample, in corpus order."""
    if len(corpus) == 0:
        raise EmptyCorpus("cannot build a feature matrix from an empty corpus")
    rows = np.vstack([vectorize(s.summary, vocabulary) for s in corpus])
    return FeatureMatrix(
        vocabulary=vocabulary,
        rows=rows,
        ids=tuple(s.id for s in corpus),
        labels=tuple(s.category for s in corpus),
    )


def save_vocabulary(vocabulary: Vocabulary, path: str | Path) -> None:
    Path(path).write_text("".join(n + "\n" for n in vocabulary.names), encoding="utf-8")


def load_vocabulary(path: str | Path) -> Vocabulary:
    names = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln]
    return Vocabulary(names=tuple(names))


def matrix_to_csv(matrix: FeatureMatrix) -> str:
    """CSV form: id, category, then call:<name> / err:<name> columns.

    Floats are written with repr so a load returns bit-identical values.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "category"] + matrix.vocabulary.feature_names())
    for sample_id, category, row in zip(matrix.ids, matrix.labels, matrix.rows):
        writer.writerow([sample_id, category.value] + [repr(float(v)) for v in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> FeatureMatrix:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if not header or header[:2] != ["id", "category"]:
        raise MatrixFormatError("matrix CSV must start with id,category columns")
    feature_cols = header[2:]
    half = len(feature_cols) // 2
    if len(feature_cols) % 2 != 0:
        raise MatrixFormatError("feature columns must pair call:/err: halves")
    call_names = [c.removeprefix("call:") for c in feature_cols[:half]]
    err_names = [c.removeprefix("err:") for c in feature_cols[half:]]
    if call_names != err_names or any(not c.startswith("call:") for c in feature_cols[:half]):
        raise MatrixFormatError("call:/err: column halves do not mirror each other")
    vocabulary = Vocabulary(names=tuple(call_names))

    ids: list[str] = []
    labels: list[Category] = []
    rows: list[list[float]] = []
    for record in reader:
        if not record:
            continue
        if len(record) != 2 + len(feature_cols):
            raise MatrixFormatError(f"row for {record[0]!r} has {len(record)} fields")
        ids.append(record[0])
        labels.append(Category.from_token(record[1]))
        rows.append([float(v) for v in record[2:]])
    data = np.array(rows, dtype=float) if rows else np.zeros((0, 2 * half))
    return FeatureMatrix(
        vocabulary=vocabulary, rows=data, ids=tuple(ids), labels=tuple(labels)
    )


def save_matrix(matrix: FeatureMatrix, path: str | Path) -> None:
    Path(path).write_text(matrix_to_csv(matrix), encoding="utf-8")


def load_matrix(path: str | Path) -> FeatureMatrix:
    return matrix_from_csv(Path(path).read_text(encoding="utf-8"))
