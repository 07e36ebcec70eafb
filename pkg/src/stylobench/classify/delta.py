"""Burrows's Delta and Cosine Delta with nearest-document attribution."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)


class DegenerateInputError(ValueError):
    """Raised when a distance is undefined for the given vectors."""


def _check_pair(z1, z2):
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if z1.shape != z2.shape:
        raise ValueError(f"width mismatch: {z1.shape} vs {z2.shape}")
    if z1.size == 0:
        raise ValueError("distance needs at least one feature")
    return z1, z2


def delta_distance(z1, z2) -> float:
    """Mean absolute difference between two z-score vectors."""
    z1, z2 = _check_pair(z1, z2)
    return float(np.mean(np.abs(z1 - z2)))


def cosine_delta_distance(z1, z2) -> float:
    z1, z2 = _check_pair(z1, z2)
    n1 = np.linalg.norm(z1)
    n2 = np.linalg.norm(z2)
    if n1 == 0 or n2 == 0:
        raise DegenerateInputError("cosine distance is undefined for a zero vector")
    cos = float(np.dot(z1, z2) / (n1 * n2))
    return 1.0 - min(1.0, max(-1.0, cos))


DISTANCES = {"delta": delta_distance, "cosine": cosine_delta_distance}


@dataclass(frozen=True)
class NearestModel:
    rows: np.ndarray
    doc_ids: tuple[str, ...]
    authors: tuple[str, ...]
    distance: str = "delta"

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.shape[0] < 1:
            raise ValueError("nearest model needs at least one training row")
        if not (rows.shape[0] == len(self.authors) == len(self.doc_ids)):
            raise ValueError("rows, doc_ids and authors must have equal length")
        if self.distance not in DISTANCES:
            raise ValueError(f"unknown distance {self.distance!r}")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    def distances(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.shape != self.rows.shape[1:]:
            raise ValueError(f"width mismatch: {z.shape[-1]} vs {self.rows.shape[1]}")
        if z.size == 0:
            raise ValueError("distance needs at least one feature")
        manhattan = np.abs(self.rows - z).mean(axis=1)
        if self.distance == "delta":
            return manhattan
        norms = np.linalg.norm(self.rows, axis=1)
        zn = np.linalg.norm(z)
        out = manhattan.copy()
        ok = norms > 0 if zn > 0 else np.zeros(len(norms), dtype=bool)
        if not ok.all():
            logger.info("zero-norm vector under cosine delta: %d comparisons fall back to classic delta",
                        int((~ok).sum()))
        if ok.any():
            cos = (self.rows[ok] @ z) / (norms[ok] * zn)
            out[ok] = 1.0 - np.clip(cos, -1.0, 1.0)
        return out


def train_nearest(rows, authors: Sequence[str], distance: str = "delta",
                  doc_ids: Sequence[str] | None = None) -> NearestModel:
    if doc_ids is None:
        doc_ids = tuple(str(i) for i in range(len(authors)))
    return NearestModel(np.asarray(rows, dtype=float), tuple(doc_ids), tuple(authors), distance)


def classify_nearest(model: NearestModel, z) -> str:
    # np.argmin returns the first minimum, which is the documented tie rule
    return model.authors[int(np.argmin(model.distances(z)))]
