"""Cross-validated evaluation: LOOCV driver, macro metrics, Wilcoxon tests."""

from .grid import (
    DEFAULT_K_GRID,
    CellError,
    GridResult,
    loocv,
    paired_curves,
    read_results,
    results_to_csv,
    run_grid,
    run_matrices,
    train_fold,
    write_results,
)
from .metrics import ConfusionMatrix, MetricsReport, PredictionRecord, confusion, macro_metrics, score
from .wilcoxon import WilcoxonResult, significance_stars, wilcoxon_signed_rank

__all__ = [
    "DEFAULT_K_GRID",
    "CellError",
    "ConfusionMatrix",
    "GridResult",
    "MetricsReport",
    "PredictionRecord",
    "WilcoxonResult",
    "confusion",
    "loocv",
    "macro_metrics",
    "paired_curves",
    "read_results",
    "results_to_csv",
    "run_grid",
    "run_matrices",
    "score",
    "significance_stars",
    "train_fold",
    "wilcoxon_signed_rank",
    "write_results",
]
