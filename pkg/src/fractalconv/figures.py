"""Matplotlib renderings for the report-producing CLI paths.

Every helper writes a PNG to the given path and returns the path, so report
commands can emit figures next to their delimited output.  The Agg backend
is forced before pyplot loads; nothing here opens a window.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .ek import CoverResult
from .fourier import DecayEstimate
from .measure import DensityGrid, PointCloud
from .separation import ConcentrationReport


def render_density(grid: DensityGrid, path: str | Path, title: str = "") -> Path:
    """Log-scaled density heatmap of a rasterized measure."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 6))
    xmin, xmax, ymin, ymax = grid.bounds
    img = np.log1p(grid.cells / max(grid.cells.max(), 1e-300))
    ax.imshow(img, extent=(xmin, xmax, ymin, ymax), origin="upper", cmap="magma", aspect="equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_points(cloud: PointCloud, path: str | Path, title: str = "") -> Path:
    """Scatter of sampled attractor points (subsampled past 200k)."""
    path = Path(path)
    pts = cloud.points
    if pts.shape[0] > 200_000:
        pts = pts[:: pts.shape[0] // 200_000 + 1]
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(pts.real, pts.imag, ",", color="black", alpha=0.35)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_decay(estimate: DecayEstimate, path: str | Path, title: str = "") -> Path:
    """Log-log plot of annulus suprema with the fitted power law."""
    path = Path(path)
    r = np.asarray(estimate.r_values)
    sup = np.asarray(estimate.sup_values)
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.loglog(r, sup, "o-", label="sup over annulus")
    fit = estimate.c_hat * r ** (-estimate.gamma_hat)
    ax.loglog(r, fit, "--", label=f"fit: gamma = {estimate.gamma_hat:.4f}")
    ax.set_xlabel("|xi|")
    ax.set_ylabel("sup |FT|")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_concentration(report: ConcentrationReport, path: str | Path, title: str = "") -> Path:
    """Semilog plot of the level-n cylinder separation values."""
    path = Path(path)
    ns = [n for n, _, _ in report.records]
    vals = [max(delta, 1e-300) for _, delta, _ in report.records]
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.semilogy(ns, vals, "s-", color="tab:blue")
    ax.set_xlabel("n")
    ax.set_ylabel("min nonzero |sum d_k lam^k|")
    note = f"{report.classification} (slope {report.slope:.3f}/n)" if report.slope is not None else report.classification
    ax.set_title(title or note)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_cover(result: CoverResult, path: str | Path, title: str = "") -> Path:
    """Cover balls over the search region in the expansion plane."""
    path = Path(path)
    region = result.params.region
    fig, ax = plt.subplots(figsize=(6, 6))
    angles = np.linspace(0.0, math.pi, 256)
    for rad in (region.b1, region.b2):
        ax.plot(rad * np.cos(angles), rad * np.sin(angles), color="gray", lw=0.8)
    ax.axhline(region.eta, color="gray", lw=0.8, ls=":")
    for ball in result.balls:
        circ = plt.Circle((ball.center.real, ball.center.imag), ball.radius, fill=False, color="tab:red", lw=0.7, alpha=0.7)
        ax.add_patch(circ)
        ax.plot([ball.center.real], [ball.center.imag], ".", color="tab:red", ms=3)
    ax.set_aspect("equal")
    pad = 0.2 + max((b.radius for b in result.balls), default=0.0)
    ax.set_xlim(-region.b2 - pad, region.b2 + pad)
    ax.set_ylim(min(0.0, region.eta) - pad, region.b2 + pad)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title or f"{len(result.balls)} balls at depth {result.params.N}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
