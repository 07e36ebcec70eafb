"""Leave-one-out attribution over the marker x classifier x feature-count grid."""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from ..classify import ClassifierKind, predict, train
from ..corpus import Corpus, validate_labels
from ..features import ALL_SPECS, FrequencyMatrix, MarkerSpec, MarkerType, Scaler, build_matrix, fit_scaler
from .metrics import MetricsReport, PredictionRecord, score

logger = logging.getLogger(__name__)

DEFAULT_K_GRID: tuple[int, ...] = (35, *range(100, 2001, 50))
MIN_VOCABULARY = DEFAULT_K_GRID[0]
RESULTS_HEADER = ("corpus", "marker", "ngram", "classifier", "features",
                  "accuracy", "precision", "recall", "f1", "exhausted")


class CellError(RuntimeError):
    """A grid cell failed; the message carries its coordinates."""


@dataclass(frozen=True)
class Fold:
    held_out: int
    scaler: Scaler
    model: object


def train_fold(matrix: FrequencyMatrix, held_out: int, kind: ClassifierKind) -> Fold:
    """Scaler and classifier for the fold that holds out row ``held_out``.

    Only the other rows are read, so the result does not depend on the
    held-out row's values.
    """
    train_idx = [i for i in range(len(matrix.doc_ids)) if i != held_out]
    scaler = fit_scaler(matrix.values, train_idx)
    if len(scaler.retained) == 0:
        raise ValueError(f"fold {matrix.doc_ids[held_out]}: every feature is constant over the training rows")
    rows = scaler.transform(matrix.values[train_idx])
    labels = [matrix.authors[i] for i in train_idx]
    ids = [matrix.doc_ids[i] for i in train_idx]
    return Fold(held_out, scaler, train(kind, rows, labels, ids))


def loocv(matrix: FrequencyMatrix, kind: ClassifierKind) -> list[PredictionRecord]:
    validate_labels(matrix.authors)
    records = []
    for i, doc_id in enumerate(matrix.doc_ids):
        fold = train_fold(matrix, i, kind)
        dropped = matrix.width - len(fold.scaler.retained)
        if dropped:
            logger.debug("%s: %d zero-variance features dropped", doc_id, dropped)
        z = fold.scaler.transform(matrix.values[i])
        records.append(PredictionRecord(doc_id, matrix.authors[i], predict(fold.model, z)))
    return records


@dataclass(frozen=True)
class GridResult:
    corpus: str
    spec: MarkerSpec
    classifier: ClassifierKind
    k: int
    metrics: Optional[MetricsReport]  # None when the cell is unavailable
    exhausted: bool

    @property
    def available(self) -> bool:
        return self.metrics is not None

    def sort_key(self):
        return (self.corpus, self.spec._key(), list(ClassifierKind).index(self.classifier), self.k)


def _run_cell(corpus_id: str, matrix: FrequencyMatrix, kind: ClassifierKind, k: int) -> GridResult:
    sub = matrix.truncate(k)
    try:
        report = score(loocv(sub, kind))
    except Exception as exc:
        raise CellError(f"cell ({corpus_id}, {matrix.spec}, {kind.value}, k={k}) failed: {exc}") from exc
    return GridResult(corpus_id, matrix.spec, kind, k, report, False)


def _unavailable(corpus_id, spec, kind, k) -> GridResult:
    return GridResult(corpus_id, spec, kind, k, None, True)


def run_matrices(
    matrices: Sequence[FrequencyMatrix],
    classifiers: Sequence[ClassifierKind] = tuple(ClassifierKind),
    k_grid: Sequence[int] = DEFAULT_K_GRID,
    corpus_id: str = "corpus",
    jobs: int = 1,
) -> list[GridResult]:
    """Evaluate prebuilt matrices; each must be at least as wide as the k it is asked for
    or flagged with its full vocabulary size."""
    k_grid = sorted(set(k_grid))
    for m in matrices:
        validate_labels(m.authors)
    todo, results = [], []
    for matrix in matrices:
        spec = matrix.spec
        for kind in classifiers:
            for k in k_grid:
                if matrix.vocabulary_size < max(k, MIN_VOCABULARY):
                    results.append(_unavailable(corpus_id, spec, kind, k))
                else:
                    todo.append((corpus_id, matrix, kind, k))
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_cell, *args) for args in todo]
            results.extend(f.result() for f in futures)
    else:
        results.extend(_run_cell(*args) for args in todo)
    return sorted(results, key=GridResult.sort_key)


def run_grid(
    corpus: Corpus,
    specs: Sequence[MarkerSpec] = ALL_SPECS,
    classifiers: Sequence[ClassifierKind] = tuple(ClassifierKind),
    k_grid: Sequence[int] = DEFAULT_K_GRID,
    corpus_id: str = "corpus",
    jobs: int = 1,
) -> list[GridResult]:
    """Full experiment grid. Features are ranked once on the whole corpus and each
    cell takes a prefix of that ranking; z-scores are refit inside every fold."""
    kmax = max(k_grid)
    matrices = [build_matrix(corpus, spec, kmax) for spec in sorted(set(specs))]
    return run_matrices(matrices, classifiers, k_grid, corpus_id, jobs)


# --- results table ----------------------------------------------------------

def _fmt(v: Optional[float]) -> str:
    return "" if v is None else f"{v:.3f}"


def write_results(results: Iterable[GridResult], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RESULTS_HEADER)
    for r in results:
        m = r.metrics
        writer.writerow([
            r.corpus, r.spec.marker.value, r.spec.n, r.classifier.value, r.k,
            _fmt(m and m.accuracy), _fmt(m and m.precision), _fmt(m and m.recall), _fmt(m and m.f1),
            int(r.exhausted),
        ])


def results_to_csv(results: Iterable[GridResult]) -> str:
    buf = io.StringIO()
    write_results(results, buf)
    return buf.getvalue()


def read_results(stream) -> list[GridResult]:
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != RESULTS_HEADER:
        raise ValueError(f"unexpected results header: {reader.fieldnames}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        try:
            spec = MarkerSpec(MarkerType(row["marker"]), int(row["ngram"]))
            kind = ClassifierKind(row["classifier"])
            metrics = None
            if row["f1"] != "":
                metrics = MetricsReport(*(float(row[c]) for c in ("accuracy", "precision", "recall", "f1")))
            out.append(GridResult(row["corpus"], spec, kind, int(row["features"]), metrics,
                                  row["exhausted"] == "1"))
        except (ValueError, KeyError) as exc:
            raise ValueError(f"results line {lineno}: {exc}") from None
    return out


def curve(results: Iterable[GridResult], spec: MarkerSpec, kind: ClassifierKind,
          corpus: Optional[str] = None) -> dict[int, float]:
    """F1 by feature count for the available cells of one (marker, classifier) series."""
    return {
        r.k: r.metrics.f1
        for r in results
        if r.spec == spec and r.classifier is kind and r.available
        and (corpus is None or r.corpus == corpus)
    }


def paired_curves(results: Sequence[GridResult], a: MarkerSpec, b: MarkerSpec, kind: ClassifierKind,
                  corpus: Optional[str] = None) -> tuple[list[int], np.ndarray, np.ndarray]:
    ca = curve(results, a, kind, corpus)
    cb = curve(results, b, kind, corpus)
    missing = sorted((set(ca) ^ set(cb)))
    if missing or not ca:
        detail = ", ".join(
            f"k={k} missing for {b if k in ca else a}" for k in missing
        ) or f"no available cells for {a} / {b} with {kind.value}"
        raise ValueError(f"cannot pair curves: {detail}")
    ks = sorted(ca)
    return ks, np.array([ca[k] for k in ks]), np.array([cb[k] for k in ks])
