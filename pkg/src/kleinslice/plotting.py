"""Matplotlib figures for rasters and convergence reports.

Everything renders through the Agg backend to files; nothing is shown.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .discreteness import CERTIFIED, ERROR, LIKELY, MEMBER  # noqa: E402
from .slices import GRAY, SliceRaster  # noqa: E402

# colour index = verdict code, shades follow the PGM gray levels
_CMAP = ListedColormap([(GRAY[c] / 255,) * 3 for c in (MEMBER, LIKELY, CERTIFIED, ERROR)])


def _extent(r: SliceRaster):
    w = r.window
    c = w.center
    return [c.real - w.width / 2, c.real + w.width / 2, c.imag - w.height / 2, c.imag + w.height / 2]


def draw_raster(ax, r: SliceRaster, title: str | None = None) -> None:
    ax.imshow(r.cells, origin="lower", extent=_extent(r), cmap=_CMAP, vmin=-0.5, vmax=3.5,
              interpolation="nearest")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title, fontsize=9)


def plot_raster(r: SliceRaster, path, title: str | None = None, dpi: int = 150) -> Path:
    fig, ax = plt.subplots(figsize=(6, 6 * r.window.height / r.window.width))
    draw_raster(ax, r, title)
    fig.tight_layout()
    return _save(fig, path, dpi)


def plot_panels(rasters: Sequence[SliceRaster], titles: Sequence[str], path,
                ncols: int = 2, dpi: int = 120) -> Path:
    """Grid of panels filled row by row."""
    n = len(rasters)
    nrows = math.ceil(n / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(4 * ncols, 4 * nrows), squeeze=False)
    for ax, r, t in zip(axes.ravel(), rasters, titles):
        draw_raster(ax, r, t)
    for ax in axes.ravel()[n:]:
        ax.axis("off")
    fig.tight_layout()
    return _save(fig, path, dpi)


def plot_convergence(report, path, dpi: int = 120) -> Path:
    """Hausdorff distance and member area of each L(beta_n) against n."""
    ns = [r.n for r in report.rows]
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(9, 3.5))
    h = np.array([r.hausdorff for r in report.rows], dtype=float)
    a1.plot(ns, np.where(np.isinf(h), np.nan, h), "o-")
    a1.set_xlabel("n")
    a1.set_ylabel("Hausdorff distance to limit")
    a2.plot(ns, [r.member_area for r in report.rows], "o-", label="L(beta_n)")
    if report.limit is not None:
        a2.axhline(report.limit["member_area"], color="k", ls="--", label="limit")
    a2.set_xlabel("n")
    a2.set_ylabel("member area")
    a2.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path, dpi)


def plot_cyclic(ns, distances, path, dpi: int = 120) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.loglog(ns, distances, "o-")
    ax.set_xlabel("n")
    ax.set_ylabel("distance to the parabolic limit")
    fig.tight_layout()
    return _save(fig, path, dpi)


def _save(fig, path, dpi) -> Path:
    path = Path(path)
    try:
        # fixed metadata keeps repeated runs byte-identical
        fig.savefig(path, dpi=dpi, metadata={"Software": None})
    finally:
        plt.close(fig)
    return path
