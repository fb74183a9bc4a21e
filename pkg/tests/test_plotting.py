import hashlib

import numpy as np

from kleinslice.discreteness import ScanParams
from kleinslice.limits import Horocyclic, run_experiment
from kleinslice.plotting import plot_convergence, plot_cyclic, plot_panels, plot_raster
from kleinslice.slices import SliceRaster, Window


def _raster():
    cells = np.arange(64).reshape(8, 8) % 4
    return SliceRaster(Window(1j, 4, 2), 8, 8, cells, {"kind": "demo"})


def test_plot_raster(tmp_path):
    p = plot_raster(_raster(), tmp_path / "r.png", title="demo")
    assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_plot_deterministic(tmp_path):
    a = plot_raster(_raster(), tmp_path / "a.png").read_bytes()
    b = plot_raster(_raster(), tmp_path / "b.png").read_bytes()
    assert hashlib.sha256(a).digest() == hashlib.sha256(b).digest()


def test_panels_and_reports(tmp_path):
    r = _raster()
    assert plot_panels([r, r, r], ["a", "b", "c"], tmp_path / "p.png").exists()
    rep = run_experiment(Horocyclic(0.5, (0.6, 0.3)), Window(0, 8, 8), 8, 8, ScanParams(max_depth=10))
    assert plot_convergence(rep, tmp_path / "c.png").exists()
    assert plot_cyclic([10, 100], [0.3, 0.03], tmp_path / "y.png").exists()
