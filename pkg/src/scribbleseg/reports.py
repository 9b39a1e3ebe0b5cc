"""Delimited report tables and companion figures.

Evaluation and consensus results are written as comma-separated tables
with a header row; the same report paths render matplotlib figures next
to the delimited output so results can be eyeballed without extra
tooling.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib import colors as mcolors

from .evaluation import ConsensusMap, IouReport, ScoreReport, checkpoint_gate

EVAL_HEADER = ["image", "category", "iou", "mean_iou", "passed"]
SCORE_HEADER = [
    "mean_iou",
    "elapsed_s",
    "object_count",
    "expected_time_s",
    "base_score",
    "bonus",
    "final_score",
]
CONSENSUS_HEADER = ["annotator_count", "pixels"]


def eval_table(
    per_image: dict[str, IouReport],
    aggregate: IouReport,
    threshold: float = 0.70,
) -> str:
    """Long-form CSV: one row per (image, category), plus ALL rows.

    Mean rows carry the checkpoint verdict against the threshold.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EVAL_HEADER)

    def mean_row(name: str, report: IouReport) -> list:
        verdict = "pass" if checkpoint_gate(report, threshold) else "fail"
        return [name, "mean", "", f"{report.mean_iou:.6f}", verdict]

    for name in sorted(per_image):
        report = per_image[name]
        for c in report.categories_evaluated:
            writer.writerow([name, c, f"{report.per_category[c]:.6f}", "", ""])
        writer.writerow(mean_row(name, report))
    for c in aggregate.categories_evaluated:
        writer.writerow(["ALL", c, f"{aggregate.per_category[c]:.6f}", "", ""])
    writer.writerow(mean_row("ALL", aggregate))
    return buf.getvalue()


def score_table(mean_iou: float, elapsed: float, object_count: int, report: ScoreReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCORE_HEADER)
    writer.writerow(
        [
            f"{mean_iou:.6f}",
            f"{elapsed:.3f}",
            object_count,
            f"{report.expected_time:.1f}",
            report.base_score,
            f"{report.bonus:.4f}",
            report.final_score,
        ]
    )
    return buf.getvalue()


def consensus_table(consensus: ConsensusMap) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CONSENSUS_HEADER)
    hist = np.bincount(consensus.counts.reshape(-1), minlength=consensus.annotator_total + 1)
    for count, pixels in enumerate(hist):
        writer.writerow([count, int(pixels)])
    return buf.getvalue()


def plot_category_iou(path: str | Path, aggregate: IouReport, title: str = "per-category IoU") -> Path:
    """Bar chart of aggregate per-category IoU with the mean marked."""
    path = Path(path)
    cats = list(aggregate.categories_evaluated)
    values = [aggregate.per_category[c] for c in cats]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.5 * len(cats) + 2.0), 3.2))
    ax.bar([str(c) for c in cats], values, color="#4878a8")
    ax.axhline(aggregate.mean_iou, color="#b0413e", linewidth=1.2,
               label=f"mean = {aggregate.mean_iou:.3f}")
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("category")
    ax.set_ylabel("IoU")
    ax.set_title(title)
    ax.legend(loc="lower right", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_consensus_map(path: str | Path, consensus: ConsensusMap) -> Path:
    """Agreement heatmap: dark blue (one annotator) to dark red (all)."""
    path = Path(path)
    counts = consensus.counts.astype(float)
    masked = np.ma.masked_where(counts == 0, counts)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    cmap = matplotlib.colormaps["jet"].copy()
    cmap.set_bad(color="white")
    norm = mcolors.Normalize(vmin=1, vmax=max(1, consensus.annotator_total))
    im = ax.imshow(masked, cmap=cmap, norm=norm, interpolation="nearest")
    ax.set_title(f"annotators marking category {consensus.category}")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.colorbar(im, ax=ax, label="annotators")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
