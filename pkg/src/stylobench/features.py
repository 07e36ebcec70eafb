"""Style-marker extraction: projections, n-grams, ranked frequency matrices, z-scores."""

from __future__ import annotations

import csv
import enum
import functools
import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .corpus import Corpus, Document, truncate_tag

logger = logging.getLogger(__name__)


class MarkerType(enum.Enum):
    WORDFORM = "wordform"
    LEMMA = "lemma"
    FULLTAG = "fulltag"
    POS1 = "pos1"
    POS2 = "pos2"


@functools.total_ordering
@dataclass(frozen=True)
class MarkerSpec:
    marker: MarkerType
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= 3:
            raise ValueError(f"n-gram order must be 1..3, got {self.n}")

    @classmethod
    def parse(cls, text: str) -> "MarkerSpec":
        """Parse ``<type>:<n>``, e.g. ``wordform:1`` or ``pos2:3``."""
        name, sep, n = text.strip().partition(":")
        if not sep:
            raise ValueError(f"marker {text!r} must look like <type>:<n>")
        try:
            return cls(MarkerType(name.lower()), int(n))
        except ValueError:
            raise ValueError(f"invalid marker {text!r}") from None

    def __str__(self) -> str:
        return f"{self.marker.value}:{self.n}"

    def __lt__(self, other):
        if not isinstance(other, MarkerSpec):
            return NotImplemented
        return self._key() < other._key()

    def _key(self):
        return (list(MarkerType).index(self.marker), self.n)


ALL_SPECS: tuple[MarkerSpec, ...] = tuple(MarkerSpec(m, n) for m in MarkerType for n in (1, 2, 3))


def project(doc: Document, marker: MarkerType) -> list[str]:
    toks = doc.tokens
    if marker is MarkerType.WORDFORM:
        return [t.form.lower() for t in toks]
    if marker is MarkerType.LEMMA:
        return [t.lemma.lower() for t in toks]
    if marker is MarkerType.FULLTAG:
        return [t.tag.raw for t in toks]
    if marker is MarkerType.POS1:
        return [truncate_tag(t.tag, 1) for t in toks]
    if marker is MarkerType.POS2:
        return [truncate_tag(t.tag, 2) for t in toks]
    raise ValueError(marker)


def ngram_counts(stream: Sequence[str], n: int) -> Counter:
    if not 1 <= n <= 3:
        raise ValueError(f"n-gram order must be 1..3, got {n}")
    if n == 1:
        return Counter(stream)
    return Counter(" ".join(stream[i:i + n]) for i in range(len(stream) - n + 1))


def _doc_counts(corpus: Corpus, spec: MarkerSpec) -> list[Counter]:
    return [ngram_counts(project(doc, spec.marker), spec.n) for doc in corpus]


def _rank(counts: Iterable[Counter]) -> list[str]:
    total = Counter()
    for c in counts:
        total.update(c)
    return sorted(total, key=lambda f: (-total[f], f))


def rank_features(corpus: Corpus, spec: MarkerSpec) -> list[str]:
    """All n-grams of the corpus by descending total count, ties lexicographic."""
    return _rank(_doc_counts(corpus, spec))


@dataclass(frozen=True)
class FrequencyMatrix:
    """Relative frequencies of the top-ranked features, one row per document.

    ``k`` is the requested width; the actual width is ``len(features)`` and may be
    smaller when the vocabulary runs out (``exhausted``).
    """

    doc_ids: tuple[str, ...]
    authors: tuple[str, ...]
    features: tuple[str, ...]
    values: np.ndarray
    spec: Optional[MarkerSpec]
    k: int
    vocabulary_size: Optional[int] = None
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(self.doc_ids), len(self.features)):
            raise ValueError(
                f"values shape {vals.shape} does not match "
                f"{len(self.doc_ids)} documents x {len(self.features)} features"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.vocabulary_size is None:
            object.__setattr__(self, "vocabulary_size", len(self.features))

    @property
    def width(self) -> int:
        return len(self.features)

    @property
    def exhausted(self) -> bool:
        return self.vocabulary_size < self.k

    def truncate(self, k: int) -> "FrequencyMatrix":
        """Restrict to the ``k`` top-ranked columns (fewer if the vocabulary is short)."""
        if k < 1:
            raise ValueError("k must be >= 1")
        w = min(k, self.vocabulary_size)
        if w > self.width:
            raise ValueError(f"matrix holds only {self.width} columns, cannot widen to {w}")
        return replace(self, features=self.features[:w], values=self.values[:, :w], k=k)

    def to_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["document", *self.features])
        for doc_id, row in zip(self.doc_ids, self.values):
            writer.writerow([doc_id, *(repr(float(v)) for v in row)])


def build_matrix(corpus: Corpus, spec: MarkerSpec, k: int) -> FrequencyMatrix:
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = _doc_counts(corpus, spec)
    ranked = _rank(counts)
    chosen = ranked[:k]
    values = np.zeros((len(counts), len(chosen)))
    notes = []
    for i, (doc, c) in enumerate(zip(corpus, counts)):
        total = max(0, len(doc) - spec.n + 1)
        if total == 0:
            msg = f"{doc.doc_id}: {len(doc)} tokens is shorter than n={spec.n}; row left at zero"
            logger.warning(msg)
            notes.append(msg)
            continue
        values[i] = [c[f] / total for f in chosen]
    if len(ranked) < k:
        logger.info("%s: vocabulary of %d exhausted before k=%d", spec, len(ranked), k)
    return FrequencyMatrix(
        doc_ids=tuple(d.doc_id for d in corpus),
        authors=tuple(d.author for d in corpus),
        features=tuple(chosen),
        values=values,
        spec=spec,
        k=k,
        vocabulary_size=len(ranked),
        warnings=tuple(notes),
    )


@dataclass(frozen=True)
class Scaler:
    mean: np.ndarray
    std: np.ndarray
    retained: np.ndarray  # column indices with nonzero training spread

    @property
    def width(self) -> int:
        return len(self.mean)

    def transform(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=float)
        if rows.shape[-1] != self.width:
            raise ValueError(f"row width {rows.shape[-1]} != scaler width {self.width}")
        r = self.retained
        return (rows[..., r] - self.mean[r]) / self.std[r]


def fit_scaler(values: np.ndarray, rows: Sequence[int]) -> Scaler:
    """Per-feature mean and population std over the training ``rows``.

    Features that are constant over the training rows are left out of
    ``retained`` instead of being given a zero z-score.
    """
    values = np.asarray(getattr(values, "values", values), dtype=float)
    idx = np.asarray(rows, dtype=int)
    if idx.size < 2:
        raise ValueError("fit_scaler needs at least 2 training rows")
    train = values[idx]
    mean = train.mean(axis=0)
    std = train.std(axis=0)
    retained = np.flatnonzero(np.ptp(train, axis=0) > 0)
    return Scaler(mean=mean, std=std, retained=retained)


def apply_scaler(scaler: Scaler, row: np.ndarray) -> np.ndarray:
    return scaler.transform(row)
