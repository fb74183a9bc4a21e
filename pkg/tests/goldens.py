"""Self-golden digests of the figure panels.

Run this file directly to (re)pin the digests after checking the pictures.
"""
import hashlib
import json
import sys
import tempfile
from pathlib import Path

from kleinslice import figures
from kleinslice.slices import write_raster

GOLDEN = Path(__file__).with_name("golden") / "figures.json"
SIZE = 128


def panel_digests(size=SIZE, threads=1):
    out = {}
    with tempfile.TemporaryDirectory() as d:
        for fig, panels in (("linear", figures.linear_panels(size, threads=threads)),
                            ("twist", figures.twist_panels(size, threads=threads))):
            for k, (_, r) in enumerate(panels):
                p = Path(d) / f"{fig}_{k}.pgm"
                write_raster(r, p)
                out[f"{fig}/panel{k}"] = hashlib.sha256(p.read_bytes()).hexdigest()
    return out


def load():
    return json.loads(GOLDEN.read_text()) if GOLDEN.exists() else None


if __name__ == "__main__":
    digests = panel_digests()
    GOLDEN.write_text(json.dumps(digests, indent=2, sort_keys=True) + "\n")
    print(f"pinned {len(digests)} panels to {GOLDEN}", file=sys.stderr)
