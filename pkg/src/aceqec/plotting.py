"""Figure rendering for sweep and analysis reports.

Everything draws through the Agg backend and writes straight to files;
nothing here opens a window, so the functions are safe from headless
runs and test suites.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .analysis import FailureReport, SweepRow  # noqa: E402

__all__ = ["plot_sweep", "plot_rectangles"]


def plot_sweep(rows: Sequence[SweepRow], path: str | Path) -> Path:
    """Failure probability against asymmetry, one curve per
    (scheme, levels, p_total) combination, on log-log axes."""
    if not rows:
        raise ValueError("no sweep rows to plot")
    series: dict[tuple[str, int, float], list[tuple[float, float]]] = defaultdict(list)
    for r in rows:
        series[(r.scheme, r.levels, r.p_total)].append((r.alpha, r.p_fail_total))

    fig, ax = plt.subplots(figsize=(7.0, 4.8))
    many_p = len({p for _, _, p in series}) > 1
    for (scheme, levels, p_total), points in sorted(series.items()):
        points.sort()
        label = scheme if levels == 1 else f"{scheme} (L{levels})"
        if many_p:
            label += f", p={p_total:g}"
        ax.plot(
            [a for a, _ in points],
            [p for _, p in points],
            marker="o",
            markersize=3,
            label=label,
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("asymmetry  (p_Z-type / p_X-type)")
    ax.set_ylabel("logical failure probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def plot_rectangles(report: FailureReport, path: str | Path) -> Path:
    """Per-rectangle location counts colored by error type, with failure
    probabilities on a twin log axis."""
    rects = report.per_rectangle
    if not rects:
        raise ValueError("report has no rectangles to plot")
    xs = range(len(rects))
    colors = ["#d62728" if r.error_type == "X" else "#1f77b4" for r in rects]

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.bar(xs, [r.location_count for r in rects], color=colors)
    ax.set_xlabel("rectangle index (X first, then Z)")
    ax.set_ylabel("fault locations")
    ax.set_xticks(list(xs))

    ax2 = ax.twinx()
    positive = [max(r.p_fail, 0.0) for r in rects]
    if any(p > 0 for p in positive):
        ax2.plot(list(xs), positive, "k.--", markersize=8, alpha=0.7)
        ax2.set_yscale("log")
    ax2.set_ylabel("failure probability")
    handles = [
        plt.Rectangle((0, 0), 1, 1, color="#d62728"),
        plt.Rectangle((0, 0), 1, 1, color="#1f77b4"),
    ]
    ax.legend(handles, ["X rectangles", "Z rectangles"], fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
