"""Figure rendering for the report paths.

Every report command can render raw-histogram figures next to its
CSV/JSON output (no density smoothing; kernel estimates invent artifacts
like negative clustering coefficients). Rendering is headless.
"""

from __future__ import annotations

import math
import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = [
    "save_histogram",
    "save_overlay_histogram",
    "save_metric_histograms",
    "save_comparison_histograms",
    "save_thinning_histogram",
]

_FIGSIZE = (5.0, 3.4)
_DPI = 130


def save_histogram(
    values: Sequence[float],
    path: str,
    title: str,
    xlabel: str,
    bins: int = 30,
) -> str:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.hist(values, bins=bins, color="tab:blue", alpha=0.85)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_overlay_histogram(
    series: dict[str, Sequence[float]],
    path: str,
    title: str,
    xlabel: str,
    bins: int = 30,
) -> str:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    lo = min(min(v) for v in series.values())
    hi = max(max(v) for v in series.values())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = [lo + (hi - lo) * i / bins for i in range(bins + 1)]
    for label, values in series.items():
        ax.hist(values, bins=edges, histtype="step", linewidth=1.6, label=label)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_metric_histograms(
    table: dict[str, Sequence[float]],
    out_dir: str,
    stem: str,
    bins: int = 30,
) -> list[str]:
    paths = []
    for name, values in table.items():
        path = os.path.join(out_dir, f"{stem}_{name}.png")
        save_histogram(values, path, f"{name} over {len(values)} samples", name, bins)
        paths.append(path)
    return paths


def save_comparison_histograms(
    table_a: dict[str, Sequence[float]],
    table_b: dict[str, Sequence[float]],
    labels: tuple[str, str],
    out_dir: str,
    stem: str,
    bins: int = 30,
) -> list[str]:
    paths = []
    for name in table_a:
        path = os.path.join(out_dir, f"{stem}_{name}.png")
        save_overlay_histogram(
            {labels[0]: table_a[name], labels[1]: table_b[name]},
            path,
            f"{name}: {labels[0]} vs {labels[1]}",
            name,
            bins,
        )
        paths.append(path)
    return paths


def save_thinning_histogram(
    k_per_edge: Sequence[float],
    path: str,
    bins: int = 30,
) -> str:
    """Distribution of normalized per-pair thinning factors on a log axis."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    positive = [v for v in k_per_edge if v > 0]
    lo, hi = min(positive), max(positive)
    if lo == hi:
        lo, hi = lo / 2, hi * 2
    log_lo, log_hi = math.log10(lo), math.log10(hi)
    edges = [10 ** (log_lo + (log_hi - log_lo) * i / bins) for i in range(bins + 1)]
    ax.hist(positive, bins=edges, color="tab:orange", alpha=0.85)
    ax.set_xscale("log")
    ax.set_title(f"normalized thinning factor over {len(positive)} tracked pairs")
    ax.set_xlabel("k / |E|")
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
