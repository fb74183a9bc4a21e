"""Parameter presets for the standard slice pictures."""
from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
from scipy import ndimage

from .coords import trace_from_length
from .discreteness import ScanParams
from .limits import circle_point
from .slices import SliceRaster, Window, raster_fn, raster_linear

# Near-elliptic traces such as 2 cosh(lam/2) for lam on the circle with Im 0.1
# have imaginary part of order 1e-4, which the default real-axis tolerance
# would already certify at the root.
FIGURE_TAU = 1e-6

_IMS = (0.7, 0.3, 0.1)


def panel_lambdas():
    """(title, lam) pairs: the circle family and the diagonal family, interleaved by row."""
    out = []
    for h in _IMS:
        out.append((f"circle, Im = {h}", circle_point(h)))
        out.append((f"lambda = {h}+{h}i", complex(h, h)))
    return out


def _params(p: ScanParams | None) -> ScanParams:
    return p if p is not None else ScanParams(tau_real=FIGURE_TAU)


def linear_panels(n: int = 256, p: ScanParams | None = None, threads: int = 1):
    """Linear slices L(beta) on the width-24 square at 0."""
    p = _params(p)
    w = Window(0, 24, 24)
    return [(t, raster_linear(trace_from_length(lam), w, n, n, p, threads)) for t, lam in panel_lambdas()]


def twist_panels(n: int = 256, p: ScanParams | None = None, threads: int = 1):
    """Twist slices on the width-2 pi square at pi i."""
    p = _params(p)
    w = Window(math.pi * 1j, 2 * math.pi, 2 * math.pi)
    return [(t, raster_fn(lam, w, n, n, p, hat=False, threads=threads)) for t, lam in panel_lambdas()]


def cusp_window(n: int = 512, p: ScanParams | None = None, threads: int = 1) -> SliceRaster:
    """The slice at first trace 5.9 near 2, read through the (alpha, beta) swap."""
    p = p if p is not None else ScanParams(max_depth=80)
    return raster_linear(5.9, Window(2, 0.2, 0.2), n, n, p, threads)


def member_components(r: SliceRaster) -> int:
    """Number of 4-connected components of the member cells."""
    _, count = ndimage.label(r.member)
    return int(count)
