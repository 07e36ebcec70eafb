"""Paired Wilcoxon signed-rank test with an exact null for small samples."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, rankdata

EXACT_MAX = 25
# differences are rounded before ranking so float noise does not split ties
DIFF_DECIMALS = 12


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float      # min(W+, W-)
    pvalue: float         # two-sided
    w_plus: float
    w_minus: float
    n_nonzero: int
    method: str           # "exact", "normal" or "degenerate"

    @property
    def degenerate(self) -> bool:
        return self.method == "degenerate"


def signed_ranks(x, y) -> tuple[np.ndarray, np.ndarray]:
    """Mid-ranks of |x - y| over nonzero differences, and the difference signs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("paired samples must be 1-d and of equal length")
    if x.size == 0:
        raise ValueError("paired samples must not be empty")
    d = np.round(x - y, DIFF_DECIMALS)
    d = d[d != 0]
    return rankdata(np.abs(d)), np.sign(d)


def exact_lower_tail(ranks: np.ndarray, w: float) -> float:
    """P(W+ <= w) under the null, by convolving the per-rank sign choices.

    Mid-ranks are multiples of 1/2, so doubled ranks are integers and the
    distribution fits in an integer-indexed count array.
    """
    doubled = np.rint(2 * np.asarray(ranks)).astype(int)
    counts = np.zeros(int(doubled.sum()) + 1, dtype=object)
    counts[0] = 1
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: len(counts) - r]
        counts = counts + shifted
    cut = int(math.floor(2 * w + 1e-9))
    return float(sum(counts[: cut + 1])) / float(2 ** len(doubled))


def wilcoxon_signed_rank(x, y, exact_max: int = EXACT_MAX) -> WilcoxonResult:
    ranks, signs = signed_ranks(x, y)
    m = len(ranks)
    if m == 0:
        return WilcoxonResult(0.0, 1.0, 0.0, 0.0, 0, "degenerate")
    w_plus = float(ranks[signs > 0].sum())
    w_minus = float(ranks[signs < 0].sum())
    w = min(w_plus, w_minus)
    if m <= exact_max:
        p = 2.0 * exact_lower_tail(ranks, w)
        method = "exact"
    else:
        mean = m * (m + 1) / 4.0
        _, tie_sizes = np.unique(ranks, return_counts=True)
        var = m * (m + 1) * (2 * m + 1) / 24.0 - (tie_sizes ** 3 - tie_sizes).sum() / 48.0
        if var <= 0:
            p = 1.0
        else:
            z = (w - mean + 0.5) / math.sqrt(var)
            p = 2.0 * float(norm.cdf(min(z, 0.0)))
        method = "normal"
    return WilcoxonResult(w, min(1.0, p), w_plus, w_minus, m, method)


def significance_stars(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""
