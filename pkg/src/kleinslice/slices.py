"""Rasters of slices of the deformation space over rectangular windows."""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numba
import numpy as np

from .coords import DomainError, gamma_core, eta_traces_core
from .discreteness import (
    CERTIFIED, ERROR, LIKELY, MEMBER, ScanParams, scan_block, scan_intersection_block,
)

GRAY = {MEMBER: 96, LIKELY: 200, CERTIFIED: 255, ERROR: 0}
_CODE_OF_GRAY = {v: k for k, v in GRAY.items()}
GAMMA_STEPS = 64


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class Window:
    center: complex
    width: float
    height: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not (self.width > 0 and self.height > 0):
            raise WindowError("window width and height must be positive")

    def grid(self, nx: int, ny: int) -> np.ndarray:
        """Cell-center sample points, shape (ny, nx), row j increasing upward.

        Offsets are (2i + 1 - n) / (2n) times the extent, so grids centred at
        the origin are exactly symmetric under negation.
        """
        ox = (2 * np.arange(nx) + 1 - nx) / (2 * nx) * self.width
        oy = (2 * np.arange(ny) + 1 - ny) / (2 * ny) * self.height
        return (self.center.real + ox)[None, :] + 1j * (self.center.imag + oy)[:, None]

    def cell_size(self, nx: int, ny: int) -> tuple[float, float]:
        return self.width / nx, self.height / ny

    def as_dict(self):
        return {"center": [self.center.real, self.center.imag], "width": self.width, "height": self.height}


@dataclass
class SliceRaster:
    """Verdict codes on a window; cells[j, i] with j increasing upward."""

    window: Window
    nx: int
    ny: int
    cells: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.uint8)
        if self.cells.shape != (self.ny, self.nx):
            raise ValueError(f"cells shape {self.cells.shape} != ({self.ny}, {self.nx})")

    @property
    def member(self) -> np.ndarray:
        return self.cells == MEMBER

    def counts(self) -> dict:
        return {
            "member": int(np.sum(self.cells == MEMBER)),
            "likely": int(np.sum(self.cells == LIKELY)),
            "certified": int(np.sum(self.cells == CERTIFIED)),
            "error": int(np.sum(self.cells == ERROR)),
        }

    def member_area(self) -> float:
        dx, dy = self.window.cell_size(self.nx, self.ny)
        return self.counts()["member"] * dx * dy

    def points(self) -> np.ndarray:
        return self.window.grid(self.nx, self.ny)

    def __eq__(self, other):
        return (
            isinstance(other, SliceRaster)
            and self.window == other.window
            and (self.nx, self.ny) == (other.nx, other.ny)
            and np.array_equal(self.cells, other.cells)
            and self.meta == other.meta
        )


def _run(kernel, roots, valid, p: ScanParams, threads: int) -> np.ndarray:
    """Run a compiled scan kernel over flattened roots, split across threads.

    Chunks are fixed by the input size only, so results do not depend on
    the thread count.
    """
    m = roots.shape[0]
    out = np.empty(m, dtype=np.uint8)
    chunk = 256
    bounds = [(s, min(s + chunk, m)) for s in range(0, m, chunk)]
    args = (p.max_depth, p.delta, p.tau_real, p.trace_cap, p.descent_steps, p.max_nodes)

    def work(b):
        s, e = b
        kernel(roots[s:e], valid[s:e], *args, out[s:e])

    if threads <= 1:
        for b in bounds:
            work(b)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, bounds))
    return out


def _meta(kind, params: dict, window, nx, ny, p: ScanParams, cells) -> dict:
    meta = {
        "kind": kind,
        "parameters": {k: [complex(v).real, complex(v).imag] if not isinstance(v, (int, bool)) else v
                       for k, v in params.items()},
        "window": window.as_dict(),
        "nx": nx,
        "ny": ny,
        "scan": p.as_dict(),
    }
    c = cells
    meta["counts"] = {
        "member": int(np.sum(c == MEMBER)),
        "likely": int(np.sum(c == LIKELY)),
        "certified": int(np.sum(c == CERTIFIED)),
        "error": int(np.sum(c == ERROR)),
    }
    return meta


def _finish(kind, params, window, nx, ny, p, codes) -> SliceRaster:
    cells = codes.reshape(ny, nx)
    return SliceRaster(window, nx, ny, cells, _meta(kind, params, window, nx, ny, p, cells))


@numba.njit(cache=True)
def _linear_roots(alphas, beta, steps, roots, valid):
    for i in range(alphas.shape[0]):
        a = alphas[i]
        g, ok = gamma_core(a, beta, steps)
        roots[i, 0] = a
        roots[i, 1] = beta
        roots[i, 2] = g
        valid[i] = ok


def linear_roots(alphas: np.ndarray, beta: complex):
    flat = np.ascontiguousarray(alphas, dtype=np.complex128).ravel()
    roots = np.empty((flat.size, 3), dtype=np.complex128)
    valid = np.empty(flat.size, dtype=np.bool_)
    _linear_roots(flat, complex(beta), GAMMA_STEPS, roots, valid)
    return roots, valid


def maskit_roots(mus: np.ndarray):
    x = -1j * np.ascontiguousarray(mus, dtype=np.complex128).ravel()
    roots = np.stack([x, np.full_like(x, 2.0), x - 2j], axis=1)
    return roots, np.ones(x.size, dtype=np.bool_)


@numba.njit(cache=True)
def _fn_roots(lam, taus, roots):
    for i in range(taus.shape[0]):
        x, y, z = eta_traces_core(lam, taus[i])
        roots[i, 0] = x
        roots[i, 1] = y
        roots[i, 2] = z


def fn_roots(lam: complex, taus: np.ndarray):
    flat = np.ascontiguousarray(taus, dtype=np.complex128).ravel()
    roots = np.empty((flat.size, 3), dtype=np.complex128)
    _fn_roots(complex(lam), flat, roots)
    valid = np.isfinite(roots).all(axis=1)
    return roots, valid


def raster_linear(beta: complex, window: Window, nx: int, ny: int,
                  p: ScanParams = ScanParams(), threads: int = 1) -> SliceRaster:
    """Linear slice: alpha such that (alpha, beta) is realized in the deformation space."""
    beta = complex(beta)
    if not beta.real > 0 or (beta.imag == 0 and beta.real < 2):
        raise DomainError(f"linear slice needs Re beta > 0 and beta outside (0, 2); got {beta}")
    roots, valid = linear_roots(window.grid(nx, ny), beta)
    codes = _run(scan_block, roots, valid, p, threads)
    return _finish("linear", {"beta": beta}, window, nx, ny, p, codes)


def raster_maskit(window: Window, nx: int, ny: int,
                  p: ScanParams = ScanParams(), threads: int = 1) -> SliceRaster:
    roots, valid = maskit_roots(window.grid(nx, ny))
    codes = _run(scan_block, roots, valid, p, threads)
    return _finish("maskit", {}, window, nx, ny, p, codes)


def zeta_shifts(K: int) -> list[int]:
    """0, 1, -1, 2, -2, ..., K, -K."""
    out = [0]
    for k in range(1, K + 1):
        out += [k, -k]
    return out


def raster_m_zeta(zeta: complex, K: int, window: Window, nx: int, ny: int,
                  p: ScanParams = ScanParams(), threads: int = 1) -> SliceRaster:
    """Horizontal slice: mu with mu - k zeta in the Maskit slice for all |k| <= K."""
    zeta = complex(zeta)
    if not zeta.imag > 0:
        raise DomainError(f"horizontal slice needs Im zeta > 0; got {zeta}")
    if K < 0:
        raise DomainError("K must be non-negative")
    mus = window.grid(nx, ny).ravel()
    shifts = np.array(zeta_shifts(K))
    shifted = mus[:, None] - shifts[None, :] * zeta
    x = -1j * shifted
    roots = np.stack([x, np.full_like(x, 2.0), x - 2j], axis=2)
    valid = np.ones(mus.size, dtype=np.bool_)
    codes = _run(scan_intersection_block, np.ascontiguousarray(roots), valid, p, threads)
    return _finish("m_zeta", {"zeta": zeta, "K": int(K)}, window, nx, ny, p, codes)


def raster_fn(lam: complex, window: Window, nx: int, ny: int, p: ScanParams = ScanParams(),
              hat: bool = False, threads: int = 1) -> SliceRaster:
    """Twist slice in complex Fenchel-Nielsen coordinates at fixed length lam.

    With hat=True the window is in the normalized coordinate g_lam(tau).
    """
    lam = complex(lam)
    k = round(lam.imag / (2 * math.pi))
    if abs(lam - 2j * math.pi * k) <= 1e-9:
        raise DomainError(f"length parameter {lam} lies on 2*pi*i*Z")
    pts = window.grid(nx, ny)
    taus = lam * pts / 2 + math.pi * 1j if hat else pts
    roots, valid = fn_roots(lam, taus)
    codes = _run(scan_block, roots, valid, p, threads)
    return _finish("fn_hat" if hat else "fn", {"lambda": lam}, window, nx, ny, p, codes)


def _check_rotatable(r: SliceRaster):
    w = r.window
    if not (w.center == 0 and w.width == w.height and r.nx == r.ny):
        raise WindowError("rotation needs a square window centred at 0 with nx == ny")


def rotate_raster_iM(r: SliceRaster) -> SliceRaster:
    """Multiply the underlying set by i: the new cell at alpha is the old cell at -i alpha."""
    _check_rotatable(r)
    cells = np.ascontiguousarray(r.cells[::-1, :].T)
    meta = dict(r.meta)
    meta["kind"] = "i*" + str(r.meta.get("kind", "raster"))
    return SliceRaster(r.window, r.nx, r.ny, cells, meta)


def raster_iM(window: Window, nx: int, ny: int, p: ScanParams = ScanParams(),
              threads: int = 1) -> SliceRaster:
    _check_rotatable(SliceRaster(window, nx, ny, np.zeros((ny, nx), np.uint8)))
    return rotate_raster_iM(raster_maskit(window, nx, ny, p, threads))


def raster_iM_zeta(zeta: complex, K: int, window: Window, nx: int, ny: int,
                   p: ScanParams = ScanParams(), threads: int = 1) -> SliceRaster:
    _check_rotatable(SliceRaster(window, nx, ny, np.zeros((ny, nx), np.uint8)))
    return rotate_raster_iM(raster_m_zeta(zeta, K, window, nx, ny, p, threads))


def write_raster(r: SliceRaster, path_pgm, path_meta=None) -> None:
    path_pgm = Path(path_pgm)
    lut = np.zeros(256, dtype=np.uint8)
    for code, g in GRAY.items():
        lut[code] = g
    image = lut[r.cells[::-1, :]]  # top row of the image is the largest imaginary part
    header = f"P5\n{r.nx} {r.ny}\n255\n".encode("ascii")
    try:
        path_pgm.write_bytes(header + image.tobytes())
        if path_meta is not None:
            meta = dict(r.meta)
            meta.setdefault("window", r.window.as_dict())
            meta["nx"], meta["ny"] = r.nx, r.ny
            meta["counts"] = r.counts()
            Path(path_meta).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    except OSError as err:
        raise OSError(f"cannot write raster to {path_pgm}: {err}") from err


def _read_pgm(path: Path):
    data = path.read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while data[pos:pos + 1] not in (b"\n", b""):
                pos += 1
            continue
        s = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[s:pos])
    pos += 1
    if tokens[0] != b"P5" or int(tokens[3]) != 255:
        raise ValueError(f"{path}: not an 8-bit binary PGM")
    nx, ny = int(tokens[1]), int(tokens[2])
    pixels = np.frombuffer(data[pos:pos + nx * ny], dtype=np.uint8)
    if pixels.size != nx * ny:
        raise ValueError(f"{path}: truncated pixel data")
    return nx, ny, pixels.reshape(ny, nx)


def read_raster(path_pgm, path_meta) -> SliceRaster:
    path_pgm, path_meta = Path(path_pgm), Path(path_meta)
    try:
        nx, ny, pixels = _read_pgm(path_pgm)
        meta = json.loads(path_meta.read_text())
    except OSError as err:
        raise OSError(f"cannot read raster {path_pgm} / {path_meta}: {err}") from err
    lut = np.full(256, 255, dtype=np.uint8)
    for g, code in _CODE_OF_GRAY.items():
        lut[g] = code
    cells = lut[pixels[::-1, :]]
    if np.any(cells == 255):
        raise ValueError(f"{path_pgm}: gray level outside the verdict palette")
    w = meta["window"]
    window = Window(complex(*w["center"]), w["width"], w["height"])
    return SliceRaster(window, nx, ny, cells, meta)
