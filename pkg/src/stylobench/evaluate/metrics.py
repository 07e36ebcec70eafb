from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class PredictionRecord:
    doc_id: str
    true: str
    predicted: str

    @property
    def correct(self) -> bool:
        return self.true == self.predicted


@dataclass(frozen=True)
class ConfusionMatrix:
    classes: tuple[str, ...]
    counts: np.ndarray  # rows: true class, columns: predicted class

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def true_classes(self) -> list[int]:
        return [i for i in range(len(self.classes)) if self.counts[i].sum() > 0]


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float


def confusion(records: Iterable[PredictionRecord]) -> ConfusionMatrix:
    records = list(records)
    if not records:
        raise ValueError("confusion matrix needs at least one record")
    classes = tuple(sorted({r.true for r in records} | {r.predicted for r in records}))
    index = {c: i for i, c in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=int)
    for r in records:
        counts[index[r.true], index[r.predicted]] += 1
    return ConfusionMatrix(classes, counts)


def per_class(cm: ConfusionMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Precision and recall for each class that occurs as a true label (0/0 -> 0)."""
    c = cm.counts.astype(float)
    tp = np.diag(c)
    predicted = c.sum(axis=0)
    actual = c.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(predicted > 0, tp / predicted, 0.0)
        recall = np.where(actual > 0, tp / actual, 0.0)
    keep = cm.true_classes
    return precision[keep], recall[keep]


def macro_metrics(cm: ConfusionMatrix, f1_mode: str = "harmonic") -> MetricsReport:
    """Accuracy and macro-averaged precision, recall and F1.

    ``f1_mode="harmonic"`` (default) takes the harmonic mean of macro precision
    and macro recall; ``"mean"`` averages the per-class F1 scores instead.
    """
    total = cm.total
    if total == 0:
        raise ValueError("empty confusion matrix")
    precision, recall = per_class(cm)
    p = float(precision.mean())
    r = float(recall.mean())
    if f1_mode == "harmonic":
        f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    elif f1_mode == "mean":
        s = precision + recall
        with np.errstate(divide="ignore", invalid="ignore"):
            f1 = float(np.where(s > 0, 2 * precision * recall / s, 0.0).mean())
    else:
        raise ValueError(f"unknown f1_mode {f1_mode!r}")
    accuracy = float(np.trace(cm.counts)) / total
    return MetricsReport(accuracy, p, r, f1)


def score(records: Sequence[PredictionRecord], f1_mode: str = "harmonic") -> MetricsReport:
    return macro_metrics(confusion(records), f1_mode)
