"""Linear SVM (hinge loss, C=1), one-vs-one, trained by dual coordinate descent.

The bias is learned as the weight of a constant feature appended to every row,
so each pairwise problem is a bound-constrained dual that can be solved one
coordinate at a time in a fixed example order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

COST = 1.0
TOL = 1e-4
MAX_EPOCHS = 10_000


@dataclass(frozen=True)
class BinaryMachine:
    positive: str
    negative: str
    weights: np.ndarray
    bias: float
    epochs: int
    converged: bool

    def decision(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.weights + self.bias


@dataclass(frozen=True)
class SvmModel:
    classes: tuple[str, ...]
    machines: tuple[BinaryMachine, ...]

    @property
    def width(self) -> int:
        return len(self.machines[0].weights)


def dual_cd(gram: np.ndarray, y: np.ndarray, C: float = COST, tol: float = TOL,
            max_epochs: int = MAX_EPOCHS) -> tuple[np.ndarray, int, bool]:
    """Solve ``min_a 1/2 a'Qa - sum(a)`` s.t. ``0 <= a <= C`` with ``Q = yy' * gram``.

    Examples are visited in index order every epoch; stops when the largest
    projected-gradient violation of an epoch drops below ``tol``.
    Returns the dual coefficients, the number of epochs run and whether the
    tolerance was met.
    """
    Q = (y[:, None] * y[None, :]) * gram
    n = len(y)
    alpha = np.zeros(n)
    grad = -np.ones(n)  # Q @ alpha - 1
    diag = np.diag(Q).copy()
    for epoch in range(1, max_epochs + 1):
        worst = 0.0
        for i in range(n):
            g = grad[i]
            a = alpha[i]
            if a <= 0.0:
                pg = min(g, 0.0)
            elif a >= C:
                pg = max(g, 0.0)
            else:
                pg = g
            if pg == 0.0:
                continue
            worst = max(worst, abs(pg))
            new = min(max(a - g / diag[i], 0.0), C)
            step = new - a
            if step != 0.0:
                alpha[i] = new
                grad += step * Q[i]
        if worst < tol:
            return alpha, epoch, True
    return alpha, max_epochs, False


def train_binary(x: np.ndarray, y: np.ndarray, positive: str, negative: str,
                 C: float = COST) -> BinaryMachine:
    """Train one machine; ``y`` is +1 for ``positive`` rows and -1 otherwise."""
    x = np.asarray(x, dtype=float)
    gram = x @ x.T + 1.0
    alpha, epochs, converged = dual_cd(gram, y, C)
    coef = alpha * y
    return BinaryMachine(positive, negative, coef @ x, float(coef.sum()), epochs, converged)


def train_svm(rows, labels: Sequence[str], C: float = COST) -> SvmModel:
    x = np.asarray(rows, dtype=float)
    labels = np.asarray(labels)
    classes = tuple(sorted(set(labels.tolist())))
    if len(classes) < 2:
        raise ValueError("SVM needs at least 2 classes")
    machines = []
    for a, b in combinations(classes, 2):
        mask = (labels == a) | (labels == b)
        y = np.where(labels[mask] == a, 1.0, -1.0)
        machines.append(train_binary(x[mask], y, a, b, C))
    return SvmModel(classes, tuple(machines))


def vote_counts(model: SvmModel, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape != (model.width,):
        raise ValueError(f"width mismatch: {z.shape[-1]} vs {model.width}")
    votes = np.zeros(len(model.classes), dtype=int)
    index = {c: i for i, c in enumerate(model.classes)}
    for m in model.machines:
        winner = m.positive if m.decision(z) >= 0 else m.negative
        votes[index[winner]] += 1
    return votes


def classify_svm(model: SvmModel, z) -> str:
    return model.classes[int(np.argmax(vote_counts(model, z)))]
