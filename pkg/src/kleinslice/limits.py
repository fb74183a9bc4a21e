"""Sequences of complex lengths tending to 0 and convergence of slices.

A sequence lam_n -> 0 in the right half-plane converges horocyclically when
Im(2 pi i / lam_n) -> infinity and tangentially when it stays bounded.  The
experiments render linear slices L(beta_n), beta_n = 2 cosh(lam_n / 2), and
compare them with the predicted limit (iM for horocyclic sequences, iM(2 xi)
for tangential ones) using the Hausdorff distance between member cells.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy import ndimage

from .coords import DomainError, trace_from_length
from .discreteness import ERROR, ScanParams
from .mobius import UnitDetMatrix, parabolic, power, psl_distance
from .slices import (
    SliceRaster, Window, raster_iM, raster_iM_zeta, raster_linear, write_raster,
)

log = logging.getLogger(__name__)

CSV_HEADER = ["n", "lambda_re", "lambda_im", "beta_re", "beta_im", "hausdorff",
              "member_area", "member_cells", "error_cells"]


@dataclass(frozen=True)
class Horocyclic:
    """lam_n = t_n e^{i theta}."""

    theta: float
    scales: tuple

    def __post_init__(self):
        if not -math.pi / 2 < self.theta < math.pi / 2:
            raise DomainError("direction must lie in (-pi/2, pi/2)")
        s = tuple(float(t) for t in self.scales)
        if any(t <= 0 for t in s) or any(a <= b for a, b in zip(s, s[1:])):
            raise DomainError("scales must be positive and strictly decreasing")
        object.__setattr__(self, "scales", s)

    def lambdas(self):
        u = complex(math.cos(self.theta), math.sin(self.theta))
        return [t * u for t in self.scales]

    def labels(self):
        return list(range(1, len(self.scales) + 1))


@dataclass(frozen=True)
class Tangential:
    """lam_n = 2 pi i / (m_n + xi), so that 2 pi i / lam_n - m_n = xi."""

    xi: complex
    schedule: tuple

    def __post_init__(self):
        xi = complex(self.xi)
        if xi.imag < 0:
            raise DomainError("need Im xi >= 0")
        m = tuple(int(k) for k in self.schedule)
        if any(k <= 0 for k in m) or any(a >= b for a, b in zip(m, m[1:])):
            raise DomainError("schedule must be strictly increasing positive integers")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "schedule", m)

    def lambdas(self):
        return [2j * math.pi / (m + self.xi) for m in self.schedule]

    def labels(self):
        return list(self.schedule)


@dataclass(frozen=True)
class CircleTangential:
    """Points of the circle |z - 1| = 1 near 0 with the given imaginary parts.

    The limit raster needs xi, which the caller supplies.
    """

    im_values: tuple
    xi: Optional[complex] = None

    def __post_init__(self):
        h = tuple(float(v) for v in self.im_values)
        if any(not 0 < v <= 1 for v in h):
            raise DomainError("imaginary parts must lie in (0, 1]")
        object.__setattr__(self, "im_values", h)

    def lambdas(self):
        return [circle_point(v) for v in self.im_values]

    def labels(self):
        return list(range(1, len(self.im_values) + 1))


SequenceSpec = Union[Horocyclic, Tangential, CircleTangential]


def circle_point(im: float) -> complex:
    """The point of |z - 1| = 1 with imaginary part im, on the arc through 0."""
    if not 0 < im <= 1:
        raise DomainError("the arc through 0 has imaginary parts in (0, 1]")
    return complex(1 - math.sqrt(1 - im * im), im)


def w_values(lams: Sequence[complex]) -> np.ndarray:
    """Im(2 pi i / lam) = 2 pi Re(lam) / |lam|^2."""
    return np.array([(2j * math.pi / complex(l)).imag for l in lams])


@dataclass
class Classification:
    kind: str  # "horocyclic", "tangential" or "indeterminate"
    w: np.ndarray
    note: str = ""


def classify(lams: Sequence[complex], horo_threshold: float = 100.0,
             tangential_bound: float = 20.0) -> Classification:
    """Decide from a finite tail whether lam_n -> 0 looks horocyclic or tangential."""
    lams = [complex(l) for l in lams]
    if len(lams) < 2:
        raise DomainError("need at least two terms")
    if any(l.real <= 0 for l in lams):
        raise DomainError("all terms must lie in the right half-plane")
    if not abs(lams[-1]) < abs(lams[0]) / 10:
        raise DomainError("sequence does not visibly tend to 0 (last term >= first / 10)")
    w = w_values(lams)
    tail = w[len(w) // 2:]
    if np.all(np.diff(tail) > 0) and tail[-1] > horo_threshold:
        return Classification("horocyclic", w)
    if tail.max() < tangential_bound:
        return Classification("tangential", w)
    return Classification("indeterminate", w, "tail neither grows past the threshold nor stays bounded")


def loxodromic_near_parabolic(lam: complex) -> UnitDetMatrix:
    """[[e^{lam/2}, 2], [0, e^{-lam/2}]]: complex length lam, tends to [[1, 2], [0, 1]]."""
    e = complex(np.exp(lam / 2))
    return UnitDetMatrix(e, 2, 0, 1 / e)


def cyclic_limit_check(xi: complex, m: int) -> float:
    """Distance in PSL(2,C) between B^-m and [[1, 2 xi], [0, 1]], lam = 2 pi i/(m + xi)."""
    xi = complex(xi)
    if xi.imag < 0:
        raise DomainError("need Im xi >= 0")
    lam = 2j * math.pi / (m + xi)
    if abs(m * lam) > 50:
        raise OverflowError(f"|m lam| = {abs(m * lam)} too large")
    B = loxodromic_near_parabolic(lam)
    return psl_distance(power(B, -m), parabolic(2 * xi))


def hypothesis_distance(xi: complex, m: int) -> float:
    """Distance from B_n to the parabolic [[1, 2], [0, 1]]."""
    lam = 2j * math.pi / (m + complex(xi))
    return psl_distance(loxodromic_near_parabolic(lam), parabolic(2))


class WindowMismatch(ValueError):
    pass


def hausdorff(r1: SliceRaster, r2: SliceRaster) -> float:
    """Hausdorff distance between the member-cell centres of two rasters.

    Both empty gives 0, exactly one empty gives inf.
    """
    if r1.window != r2.window or (r1.nx, r1.ny) != (r2.nx, r2.ny):
        raise WindowMismatch("rasters must share window and resolution")
    a, b = r1.member, r2.member
    if not a.any() and not b.any():
        return 0.0
    if not a.any() or not b.any():
        return math.inf
    dx, dy = r1.window.cell_size(r1.nx, r1.ny)
    # distance from every cell to the nearest member of the other set
    to_b = ndimage.distance_transform_edt(~b, sampling=(dy, dx))
    to_a = ndimage.distance_transform_edt(~a, sampling=(dy, dx))
    return float(max(to_b[a].max(), to_a[b].max()))


@dataclass
class ConvergenceRow:
    n: int
    lam: complex
    beta: complex
    hausdorff: float
    member_area: float
    member_cells: int
    error_cells: int


@dataclass
class ConvergenceReport:
    rows: list
    limit: Optional[dict] = None
    rasters: dict = field(default_factory=dict)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in self.rows:
                w.writerow([
                    r.n, repr(r.lam.real), repr(r.lam.imag), repr(r.beta.real), repr(r.beta.imag),
                    _fmt(r.hausdorff), repr(r.member_area), r.member_cells, r.error_cells,
                ])


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return repr(float(x))


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        for k in CSV_HEADER:
            r[k] = int(r[k]) if k in ("n", "member_cells", "error_cells") else float(r[k])
    return rows


def limit_raster(spec: SequenceSpec, window: Window, nx: int, ny: int, p: ScanParams,
                 K: int = 16, threads: int = 1) -> Optional[SliceRaster]:
    if isinstance(spec, Horocyclic):
        return raster_iM(window, nx, ny, p, threads)
    xi = spec.xi
    if xi is None:
        log.warning("no xi given for the circle family; skipping the limit raster")
        return None
    if complex(xi).imag <= 0:
        log.warning("the horizontal slice needs Im xi > 0; skipping the limit raster")
        return None
    return raster_iM_zeta(2 * complex(xi), K, window, nx, ny, p, threads)


def run_experiment(spec: SequenceSpec, window: Window, nx: int, ny: int,
                   p: ScanParams = ScanParams(), K: int = 16, threads: int = 1,
                   out_dir=None) -> ConvergenceReport:
    """Render L(beta_n) for each term and compare with the predicted limit."""
    limit = limit_raster(spec, window, nx, ny, p, K, threads)
    report = ConvergenceReport(rows=[])
    if limit is not None:
        report.rasters["limit"] = limit
        report.limit = {"kind": limit.meta.get("kind"), "member_area": limit.member_area(),
                        "member_cells": int(limit.member.sum())}
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if limit is not None:
            write_raster(limit, out_dir / "limit.pgm", out_dir / "limit.json")
    for label, lam in zip(spec.labels(), spec.lambdas()):
        beta = trace_from_length(lam)
        try:
            r = raster_linear(beta, window, nx, ny, p, threads)
        except (DomainError, ValueError) as err:
            log.warning("row n=%s (lambda=%s) failed: %s", label, lam, err)
            report.rows.append(ConvergenceRow(label, lam, beta, math.nan, math.nan, 0, nx * ny))
            continue
        h = hausdorff(r, limit) if limit is not None else math.nan
        report.rows.append(ConvergenceRow(
            label, lam, beta, h, r.member_area(), int(r.member.sum()), int((r.cells == ERROR).sum()),
        ))
        report.rasters[label] = r
        if out_dir is not None:
            write_raster(r, out_dir / f"linear_{label}.pgm", out_dir / f"linear_{label}.json")
    if out_dir is not None:
        report.write_csv(out_dir / "convergence.csv")
    return report
