"""Figures written next to an evaluation report."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .runner import COLUMNS, ExampleResult, ReportRow  # noqa: E402

_PERCENT = ("G-F1", "T-F1", "G-BS", "Hall.", "Omis.", "GM-GBS")

plt.rcParams.update(
    {
        "font.size": 9,
        "axes.spines.top": False,
        "axes.spines.right": False,
        "savefig.dpi": 150,
    }
)


def metric_bars(rows: Sequence[ReportRow], path: Path) -> Path:
    """Grouped bars of the percentage columns, one group per metric."""
    fig, ax = plt.subplots(figsize=(7, 3.2))
    values = {c: v for c, v in zip(COLUMNS, zip(*(r.values() for r in rows)))}
    width = 0.8 / len(rows)
    for k, row in enumerate(rows):
        xs = [i + k * width for i in range(len(_PERCENT))]
        ax.bar(xs, [values[c][k] for c in _PERCENT], width=width, label=row.label)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(_PERCENT))])
    ax.set_xticklabels(_PERCENT)
    ax.set_ylim(0, 100)
    ax.set_ylabel("%")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def rate_histograms(results: Sequence[ExampleResult], path: Path) -> Path:
    """Per-example hallucination/omission rates and GED, as histograms."""
    fig, axes = plt.subplots(1, 3, figsize=(9, 2.8))
    bins = [i / 10 for i in range(11)]
    axes[0].hist([r.rate.hall_rate for r in results], bins=bins, color="tab:red")
    axes[0].set_xlabel("hallucination rate")
    axes[1].hist([r.rate.omis_rate for r in results], bins=bins, color="tab:blue")
    axes[1].set_xlabel("omission rate")
    costs = [r.ged_cost for r in results]
    axes[2].hist(costs, bins=max(1, min(20, int(max(costs)) + 1)), color="tab:gray")
    axes[2].set_xlabel("GED")
    axes[0].set_ylabel("examples")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def write_figures(rows: Sequence[ReportRow], results: Sequence[ExampleResult], outdir: Path) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    return [
        metric_bars(rows, outdir / "metrics.png"),
        rate_histograms(results, outdir / "rates.png"),
    ]
