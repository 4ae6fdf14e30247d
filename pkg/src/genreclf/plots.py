"""Batch rendering of per-genre predicted/target histograms.

Figures are written to static files (SVG) next to the delimited CSV
output; nothing here is interactive.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .metrics import EvaluationReport  # noqa: E402


def histogram_figure(report: EvaluationReport) -> plt.Figure:
    """Grouped bar chart: one predicted/target bar pair per genre."""
    genres = list(report.genres)
    x = range(len(genres))
    width = 0.4
    fig, ax = plt.subplots(figsize=(max(6.0, 0.6 * len(genres) + 2), 4.0))
    ax.bar([i - width / 2 for i in x], report.predicted_counts, width, label="predicted")
    ax.bar([i + width / 2 for i in x], report.target_counts, width, label="target")
    ax.set_xticks(list(x))
    ax.set_xticklabels(genres, rotation=45, ha="right")
    ax.set_ylabel("reviews")
    ax.set_title("Predicted vs target genre distribution")
    ax.legend()
    fig.tight_layout()
    return fig


def save_histogram_svg(report: EvaluationReport, path: str | Path) -> None:
    fig = histogram_figure(report)
    try:
        fig.savefig(path, format="svg")
    finally:
        plt.close(fig)


def save_histogram_csv(report: EvaluationReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["genre", "predicted", "target"])
        for g, p, t in zip(report.genres, report.predicted_counts, report.target_counts):
            writer.writerow([g, p, t])
