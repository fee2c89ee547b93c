"""Figure rendering for the report command.

Everything here draws from benchmark records plus an assembled report
and writes PNG files; no figure is ever shown interactively.  The Agg
backend is forced so rendering works on headless machines.
"""

from __future__ import annotations

import math
import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import EvaluationReport, FitFamily, cqe, predict, pue_points
from .bench import BenchRecord
from .engine import ModelKind
from .errors import IncompleteDataError


def _model_records(records: Sequence[BenchRecord], model: ModelKind) -> list[BenchRecord]:
    return [r for r in records if r.model is model and not r.failed]


def render_cqe_figure(
    records: Sequence[BenchRecord], out_dir: str, *, cqe_ratio: int = 10
) -> str | None:
    """Log-log plot of the dss = ratio * qps diagonal, one line per model."""
    fig, ax = plt.subplots(figsize=(7, 5))
    drew = False
    for model in ModelKind:
        try:
            cells = cqe(records, model, cqe_ratio)
        except IncompleteDataError:
            continue
        xs = [d for d, _ in cells]
        ys = [v for _, v in cells]
        if any(v > 0 for v in ys):
            ax.plot(xs, ys, marker="o", label=model.value)
            drew = True
    if not drew:
        plt.close(fig)
        return None
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(f"dataset size (qps = dss / {cqe_ratio})")
    ax.set_ylabel("ATD (s)")
    ax.set_title("Combined growth: latency along the dss = 10 qps diagonal")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    path = os.path.join(out_dir, "cqe.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def render_pue_figures(
    records: Sequence[BenchRecord],
    report: EvaluationReport,
    out_dir: str,
    *,
    sqe_qps: int = 1,
) -> list[str]:
    """Per model: measured ATD vs dss plus the winning fitted curve."""
    paths = []
    for row in report.rows:
        xs, ys = pue_points(records, row.model, sqe_qps)
        fig, ax = plt.subplots(figsize=(7, 5))
        ax.scatter(xs, ys, color="tab:blue", zorder=3, label="measured")
        if min(xs) > 0:
            grid = np.logspace(math.log10(min(xs)), math.log10(max(xs)), 200)
        else:
            grid = np.linspace(min(xs), max(xs), 200)
        fitted = predict(row.fit, grid)
        if np.isfinite(fitted).all():
            label = f"fit: {row.fit.family.value}"
            if row.pue_verdict is FitFamily.QUASI_RANDOM:
                label += " (quasi-random verdict)"
            ax.plot(grid, fitted, color="tab:orange", label=label)
        if min(xs) > 0:
            ax.set_xscale("log")
        ax.set_xlabel("dataset size")
        ax.set_ylabel("ATD (s)")
        ax.set_title(f"{row.model.value}: latency growth, verdict {row.pue_verdict.value}")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        path = os.path.join(out_dir, f"pue_{row.model.value}.png")
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)
    return paths


def render_heatmaps(records: Sequence[BenchRecord], out_dir: str) -> list[str]:
    """Per model: the full dss x qps ATD matrix as a heatmap.

    Skipped for models whose records do not form at least a 2x2 grid.
    """
    paths = []
    for model in ModelKind:
        recs = _model_records(records, model)
        dss_levels = sorted({r.dss for r in recs})
        qps_levels = sorted({r.qps for r in recs})
        if len(dss_levels) < 2 or len(qps_levels) < 2:
            continue
        grid = np.full((len(qps_levels), len(dss_levels)), np.nan)
        for r in recs:
            grid[qps_levels.index(r.qps), dss_levels.index(r.dss)] = r.atd_seconds
        fig, ax = plt.subplots(figsize=(7, 5))
        masked = np.ma.masked_invalid(grid)
        positive = masked.compressed()
        norm = None
        if positive.size and (positive > 0).all():
            norm = matplotlib.colors.LogNorm(vmin=positive.min(), vmax=positive.max())
        im = ax.imshow(masked, origin="lower", aspect="auto", cmap="viridis", norm=norm)
        ax.set_xticks(range(len(dss_levels)), [str(d) for d in dss_levels], rotation=45)
        ax.set_yticks(range(len(qps_levels)), [str(q) for q in qps_levels])
        ax.set_xlabel("dataset size")
        ax.set_ylabel("concurrent queries")
        ax.set_title(f"{model.value}: ATD (s) across the matrix")
        fig.colorbar(im, ax=ax, label="ATD (s)")
        path = os.path.join(out_dir, f"heatmap_{model.value}.png")
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)
    return paths


def render_all(
    records: Sequence[BenchRecord],
    report: EvaluationReport,
    out_dir: str,
    *,
    sqe_qps: int = 1,
    cqe_ratio: int = 10,
) -> list[str]:
    paths = []
    cqe_path = render_cqe_figure(records, out_dir, cqe_ratio=cqe_ratio)
    if cqe_path:
        paths.append(cqe_path)
    paths.extend(render_pue_figures(records, report, out_dir, sqe_qps=sqe_qps))
    paths.extend(render_heatmaps(records, out_dir))
    return paths
