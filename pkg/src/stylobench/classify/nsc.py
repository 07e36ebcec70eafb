"""Nearest Shrunken Centroids.

Class centroids are standardized against the overall centroid, soft-thresholded
toward it by ``threshold`` and test rows are assigned by a diagonal discriminant
with a log-prior term. The threshold is picked by stratified 5-fold
cross-validation on the training rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

N_THRESHOLDS = 30
INNER_FOLDS = 5


@dataclass(frozen=True)
class NscStats:
    """Everything NSC needs from a training set, before any shrinkage."""

    classes: tuple[str, ...]
    centroid: np.ndarray        # overall mean per feature
    class_means: np.ndarray     # classes x features
    s: np.ndarray               # pooled within-class std per feature
    s0: float
    m: np.ndarray               # per-class sqrt(1/n_k - 1/n)
    priors: np.ndarray
    d: np.ndarray               # standardized offsets, classes x features

    @property
    def scale(self) -> np.ndarray:
        return self.m[:, None] * (self.s + self.s0)[None, :]


@dataclass(frozen=True)
class NscModel:
    stats: NscStats
    threshold: float
    shrunken_d: np.ndarray
    shrunken_centroids: np.ndarray
    active: np.ndarray  # features with s_i + s0 > 0

    @property
    def classes(self) -> tuple[str, ...]:
        return self.stats.classes

    @property
    def centroid(self):
        return self.stats.centroid

    @property
    def s(self):
        return self.stats.s

    @property
    def s0(self):
        return self.stats.s0

    @property
    def priors(self):
        return self.stats.priors

    @property
    def d(self):
        return self.stats.d


def soft_threshold(d: np.ndarray, threshold: float) -> np.ndarray:
    return np.sign(d) * np.maximum(np.abs(d) - threshold, 0.0)


def nsc_statistics(rows, labels: Sequence[str]) -> NscStats:
    x = np.asarray(rows, dtype=float)
    labels = np.asarray(labels)
    classes = tuple(sorted(set(labels.tolist())))
    if len(classes) < 2:
        raise ValueError("NSC needs at least 2 classes")
    n, p = x.shape
    counts = np.array([(labels == c).sum() for c in classes], dtype=float)
    class_means = np.vstack([x[labels == c].mean(axis=0) for c in classes])
    centroid = x.mean(axis=0)
    dof = n - len(classes)
    if dof <= 0:
        raise ValueError("pooled within-class std is zero everywhere: every class has a single row")
    resid = x - class_means[[classes.index(c) for c in labels]]
    s = np.sqrt((resid ** 2).sum(axis=0) / dof)
    if not np.any(s > 0):
        raise ValueError("pooled within-class std is zero everywhere")
    s0 = float(np.median(s))
    m = np.sqrt(1.0 / counts - 1.0 / n)
    denom = m[:, None] * (s + s0)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(denom > 0, (class_means - centroid) / denom, 0.0)
    return NscStats(classes, centroid, class_means, s, s0, m, counts / n, d)


def shrink(stats: NscStats, threshold: float) -> NscModel:
    dprime = soft_threshold(stats.d, threshold)
    shrunken = stats.centroid[None, :] + stats.scale * dprime
    active = np.flatnonzero((stats.s + stats.s0) > 0)
    return NscModel(stats, float(threshold), dprime, shrunken, active)


def discriminant_scores(model: NscModel, rows) -> np.ndarray:
    """Discriminant per (row, class); the predicted class minimizes it."""
    x = np.atleast_2d(np.asarray(rows, dtype=float))
    if x.shape[1] != len(model.centroid):
        raise ValueError(f"width mismatch: {x.shape[1]} vs {len(model.centroid)}")
    a = model.active
    w = 1.0 / (model.s[a] + model.s0) ** 2
    diff = x[:, None, a] - model.shrunken_centroids[None, :, a]
    return (diff ** 2 * w).sum(axis=2) - 2.0 * np.log(model.priors)[None, :]


def classify_nsc(model: NscModel, z) -> str:
    scores = discriminant_scores(model, z)[0]
    return model.classes[int(np.argmin(scores))]


def stratified_folds(labels: Sequence[str], n_folds: int = INNER_FOLDS) -> np.ndarray:
    """Deterministic fold index per row: rows grouped by class, dealt round-robin."""
    labels = list(labels)
    order = sorted(range(len(labels)), key=lambda i: (labels[i], i))
    folds = np.empty(len(labels), dtype=int)
    for pos, i in enumerate(order):
        folds[i] = pos % n_folds
    return folds


def threshold_grid(stats: NscStats, size: int = N_THRESHOLDS) -> np.ndarray:
    return np.linspace(0.0, float(np.abs(stats.d).max()), size)


def select_threshold(rows, labels, grid: np.ndarray) -> float:
    x = np.asarray(rows, dtype=float)
    labels = np.asarray(labels)
    n_folds = min(INNER_FOLDS, len(labels))
    folds = stratified_folds(labels.tolist(), n_folds)
    correct = np.zeros(len(grid))
    for f in range(n_folds):
        test = folds == f
        train = ~test
        if not test.any() or len(set(labels[train].tolist())) < 2:
            continue
        try:
            stats = nsc_statistics(x[train], labels[train])
        except ValueError:
            continue
        for j, t in enumerate(grid):
            model = shrink(stats, t)
            pred = np.asarray(model.classes)[discriminant_scores(model, x[test]).argmin(axis=1)]
            correct[j] += (pred == labels[test]).sum()
    # argmax returns the first maximum, i.e. the smallest threshold on ties
    return float(grid[int(np.argmax(correct))])


def train_nsc(rows, labels: Sequence[str], thresholds: Optional[Sequence[float]] = None) -> NscModel:
    """Fit NSC, choosing the shrinkage threshold by inner cross-validation.

    A single-value ``thresholds`` fixes the shrinkage directly. When omitted, 30
    evenly spaced values from 0 to the largest standardized offset are tried.
    """
    stats = nsc_statistics(rows, labels)
    grid = threshold_grid(stats) if thresholds is None else np.asarray(thresholds, dtype=float)
    if grid.size == 0:
        raise ValueError("empty threshold grid")
    t = float(grid[0]) if grid.size == 1 else select_threshold(rows, labels, grid)
    return shrink(stats, t)
