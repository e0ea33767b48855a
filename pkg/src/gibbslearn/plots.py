"""Figure rendering for the CLI report paths.  Headless backend only."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_coefficient_figure(
    learned: dict[int, float],
    truth: dict[int, float] | None,
    path: str | Path,
    title: str = "learned coefficients",
) -> Path:
    path = Path(path)
    ids = sorted(learned)
    vals = [learned[t] for t in ids]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([str(t) for t in ids], vals, width=0.6, label="learned", alpha=0.75)
    if truth is not None:
        ax.plot(
            [str(t) for t in ids],
            [truth.get(t, 0.0) for t in ids],
            "k_",
            markersize=14,
            markeredgewidth=2,
            label="truth",
        )
    ax.set_xlabel("term id")
    ax.set_ylabel("coefficient")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def save_error_figure(
    truth_error: dict[int, float], epsilon: float, path: str | Path
) -> Path:
    path = Path(path)
    ids = sorted(truth_error)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.bar([str(t) for t in ids], [truth_error[t] for t in ids], width=0.6)
    ax.axhline(epsilon, color="crimson", linestyle="--", label=f"target {epsilon:g}")
    ax.set_xlabel("term id")
    ax.set_ylabel("|learned - truth|")
    ax.set_title("per-term recovery error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def save_trend_figure(
    xs: list[float],
    ys: list[float],
    path: str | Path,
    xlabel: str,
    ylabel: str,
    title: str,
    fit_loglog: bool = True,
) -> tuple[Path, float | None]:
    """Scatter on log-log axes with an optional power-law fit.

    Returns the path and the fitted slope (None when fitting is off or
    impossible)."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    slope = None
    xs_a = np.asarray(xs, dtype=float)
    ys_a = np.asarray(ys, dtype=float)
    ax.plot(xs_a, ys_a, "o", label="measured")
    keep = (xs_a > 0) & (ys_a > 0)
    if fit_loglog and keep.sum() >= 2:
        lx, ly = np.log(xs_a[keep]), np.log(ys_a[keep])
        slope, intercept = np.polyfit(lx, ly, 1)
        grid = np.linspace(lx.min(), lx.max(), 50)
        ax.plot(
            np.exp(grid),
            np.exp(intercept + slope * grid),
            "-",
            label=f"fit slope {slope:.2f}",
        )
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path, (float(slope) if slope is not None and math.isfinite(slope) else None)


def save_iteration_figure(per_iteration: list[dict], path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    its = np.arange(1, len(per_iteration) + 1)
    ax.semilogy(its, [r["max_error"] for r in per_iteration], "o-", label="max error")
    ax.semilogy(its, [r["eta"] for r in per_iteration], "s--", label="eta")
    ax.set_xlabel("iteration")
    ax.set_ylabel("value")
    ax.set_title("iterative refinement")
    ax.set_xticks(list(its))
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
