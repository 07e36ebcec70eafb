"""SVG line charts of F1 against feature count."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "svg.hashsalt": "stylobench",  # stable element ids
    "svg.fonttype": "none",
    "font.size": 10,
}


def plot_curves(series: Mapping[str, Mapping[int, float]], path: Union[str, Path], title: str) -> Path:
    path = Path(path)
    with matplotlib.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for name, points in series.items():
            ks = sorted(points)
            ax.plot(ks, [points[k] for k in ks], marker="o" if len(ks) == 1 else None, label=name)
        ax.set_ylim(0.0, 1.0)
        ax.set_xlabel("most frequent features")
        ax.set_ylabel("F1 score")
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="lower right")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
