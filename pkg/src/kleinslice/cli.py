"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 domain error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .coords import DomainError, trace_from_length
from .discreteness import ScanParams
from .slices import (
    Window, WindowError, raster_fn, raster_linear, raster_m_zeta, raster_maskit, write_raster,
)

log = logging.getLogger("kleinslice")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DOMAIN = 0, 1, 2, 3

# Defaults live here rather than in argparse so that a config file can fill
# in anything the command line leaves unset.
DEFAULTS = {
    "center": "0,0", "width": 4.0, "height": 4.0, "nx": 256, "ny": 256,
    "depth": ScanParams.max_depth, "delta": ScanParams.delta, "tol": None,
    "threads": 1, "kmax": 16, "theta": math.pi / 4, "mstart": 3, "count": 4, "nmax": 10000,
    "mode": None, "hat": False, "which": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_complex(text: str) -> complex:
    """Parse "RE,IM" (or a bare real number) into a complex number."""
    parts = str(text).split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"expected RE,IM but got {text!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _common(sp: argparse.ArgumentParser) -> None:
    g = sp.add_argument_group("window and scan")
    g.add_argument("--center", help="window centre RE,IM")
    g.add_argument("--width", type=float)
    g.add_argument("--height", type=float)
    g.add_argument("--nx", type=int)
    g.add_argument("--ny", type=int)
    g.add_argument("--depth", type=int, help="maximum scan depth")
    g.add_argument("--delta", type=float, help="escape margin above 2")
    g.add_argument("--tol", type=float, help="imaginary-part tolerance for elliptic certificates")
    g.add_argument("--threads", type=int)
    o = sp.add_argument_group("output")
    o.add_argument("--out", help="PGM file (a directory for converge and figure)")
    o.add_argument("--meta", help="JSON sidecar (default: next to --out)")
    o.add_argument("--csv", help="CSV table (converge, cyclic)")
    o.add_argument("--plot", help="also render a PNG figure to this path")
    o.add_argument("--config", help="JSON file with the same field names; flags win")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kleinslice", description="Slices of once-punctured torus deformation space.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("maskit", help="Maskit slice in the mu-plane")
    _common(sp)

    sp = sub.add_parser("linear", help="linear slice at a fixed trace")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--beta", help="fixed second trace RE,IM")
    g.add_argument("--lambda", dest="lam", help="complex length of the fixed trace")
    g.add_argument("--alpha", help="fixed first trace; the slice is the same by the trace swap")
    _common(sp)

    sp = sub.add_parser("mzeta", help="horizontal slice M(zeta)")
    sp.add_argument("--zeta")
    sp.add_argument("--kmax", type=int)
    _common(sp)

    sp = sub.add_parser("fn", help="twist slice in Fenchel-Nielsen coordinates")
    sp.add_argument("--lambda", dest="lam")
    sp.add_argument("--hat", action="store_true", default=None, help="use the normalized coordinate")
    _common(sp)

    sp = sub.add_parser("converge", help="convergence experiment for lambda_n -> 0")
    sp.add_argument("--mode", choices=["horo", "tan"])
    sp.add_argument("--theta", type=float, help="direction of the horocyclic ray")
    sp.add_argument("--scales", help="t1,t2,... strictly decreasing")
    sp.add_argument("--xi", help="tangential limit parameter RE,IM")
    sp.add_argument("--mstart", type=int)
    sp.add_argument("--count", type=int)
    sp.add_argument("--kmax", type=int)
    _common(sp)

    sp = sub.add_parser("cyclic", help="matrix limit B_n^-n -> [[1, 2 xi], [0, 1]]")
    sp.add_argument("--xi")
    sp.add_argument("--nmax", type=int)
    _common(sp)

    sp = sub.add_parser("figure", help="render the preset figure panels")
    sp.add_argument("--which", choices=["linear", "cusp", "twist"],
                    help="preset family to render")
    _common(sp)
    return p


def _merge(args: argparse.Namespace) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        if "lambda" in cfg:
            cfg["lam"] = cfg.pop("lambda")
    opts = dict(DEFAULTS)
    opts.update(cfg)
    opts.update({k: v for k, v in vars(args).items() if v is not None})
    return opts


def _window(o) -> Window:
    if o["width"] <= 0 or o["height"] <= 0 or o["nx"] <= 0 or o["ny"] <= 0:
        raise UsageError("window sizes must be positive")
    return Window(parse_complex(o["center"]), float(o["width"]), float(o["height"]))


def _scan(o, tol: float = ScanParams.tau_real) -> ScanParams:
    if o["tol"] is not None:
        tol = float(o["tol"])
    return ScanParams(max_depth=int(o["depth"]), delta=float(o["delta"]), tau_real=tol)


def _emit(r, o, default_name: str) -> None:
    out = Path(o.get("out") or default_name)
    meta = Path(o["meta"]) if o.get("meta") else out.with_suffix(".json")
    write_raster(r, out, meta)
    if o.get("plot"):
        from .plotting import plot_raster
        plot_raster(r, o["plot"], title=r.meta.get("kind"))
    log.info("wrote %s %s", out, r.counts())


def _require(o, *names):
    for n in names:
        if o.get(n) is None:
            raise UsageError(f"--{n if n != 'lam' else 'lambda'} is required")


def cmd_maskit(o):
    _emit(raster_maskit(_window(o), o["nx"], o["ny"], _scan(o), o["threads"]), o, "maskit.pgm")


def cmd_linear(o):
    given = [k for k in ("beta", "lam", "alpha") if o.get(k) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --beta, --lambda, --alpha")
    key = given[0]
    value = parse_complex(o[key])
    fixed = trace_from_length(value) if key == "lam" else value
    r = raster_linear(fixed, _window(o), o["nx"], o["ny"], _scan(o), o["threads"])
    _emit(r, o, "linear.pgm")


def cmd_mzeta(o):
    _require(o, "zeta")
    r = raster_m_zeta(parse_complex(o["zeta"]), int(o["kmax"]), _window(o), o["nx"], o["ny"],
                      _scan(o), o["threads"])
    _emit(r, o, "mzeta.pgm")


def cmd_fn(o):
    _require(o, "lam")
    r = raster_fn(parse_complex(o["lam"]), _window(o), o["nx"], o["ny"], _scan(o),
                  hat=bool(o["hat"]), threads=o["threads"])
    _emit(r, o, "fn.pgm")


def cmd_converge(o):
    from .limits import Horocyclic, Tangential, run_experiment

    if o["mode"] == "horo":
        _require(o, "scales")
        spec = Horocyclic(float(o["theta"]), tuple(_floats(o["scales"])))
    elif o["mode"] == "tan":
        _require(o, "xi")
        start, count = int(o["mstart"]), int(o["count"])
        if count < 1:
            raise UsageError("--count must be positive")
        # doubling schedule m, 2m, 4m, ...
        spec = Tangential(parse_complex(o["xi"]), tuple(start * 2 ** k for k in range(count)))
    else:
        raise UsageError("--mode horo|tan is required")
    out = Path(o.get("out") or "converge")
    report = run_experiment(spec, _window(o), o["nx"], o["ny"], _scan(o), int(o["kmax"]),
                            o["threads"], out_dir=out)
    if o.get("csv"):
        report.write_csv(o["csv"])
    if o.get("plot"):
        from .plotting import plot_convergence
        plot_convergence(report, o["plot"])
    for row in report.rows:
        print(f"n={row.n} hausdorff={row.hausdorff:.6g} member_area={row.member_area:.6g}")


def cmd_cyclic(o):
    from .limits import cyclic_limit_check, hypothesis_distance

    _require(o, "xi")
    xi = parse_complex(o["xi"])
    nmax = int(o["nmax"])
    if nmax < 1:
        raise UsageError("--nmax must be positive")
    ns = [10 ** k for k in range(1, int(math.log10(nmax) + 1e-9) + 1)] or [nmax]
    rows = [(n, cyclic_limit_check(xi, n), hypothesis_distance(xi, n)) for n in ns]
    fh = open(o["csv"], "w", newline="", encoding="utf-8") if o.get("csv") else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "limit_distance", "generator_distance"])
        for n, d, h in rows:
            w.writerow([n, repr(d), repr(h)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    if o.get("plot"):
        from .plotting import plot_cyclic
        plot_cyclic([r[0] for r in rows], [r[1] for r in rows], o["plot"])


def cmd_figure(o):
    from . import figures
    from .plotting import plot_panels, plot_raster

    which = o.get("which")
    if which is None:
        raise UsageError("--which linear|cusp|twist is required")
    out = Path(o.get("out") or which)
    out.mkdir(parents=True, exist_ok=True)
    n = int(o["nx"])
    if which == "cusp":
        r = figures.cusp_window(n, _scan(o), o["threads"])
        write_raster(r, out / "panel.pgm", out / "panel.json")
        plot_raster(r, o.get("plot") or out / "cusp.png", title="first trace 5.9")
        print(f"member components (4-connected): {figures.member_components(r)}")
        return
    p = _scan(o, figures.FIGURE_TAU)
    panels = figures.linear_panels(n, p, o["threads"]) if which == "linear" else \
        figures.twist_panels(n, p, o["threads"])
    for k, (title, r) in enumerate(panels):
        write_raster(r, out / f"panel{k}.pgm", out / f"panel{k}.json")
    plot_panels([r for _, r in panels], [t for t, _ in panels], o.get("plot") or out / f"{which}.png")


COMMANDS = {
    "maskit": cmd_maskit, "linear": cmd_linear, "mzeta": cmd_mzeta, "fn": cmd_fn,
    "converge": cmd_converge, "cyclic": cmd_cyclic, "figure": cmd_figure,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        opts = _merge(args)
        if opts["threads"] < 1:
            raise UsageError("--threads must be at least 1")
        COMMANDS[args.command](opts)
    except UsageError as err:
        print(err, file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (DomainError, WindowError) as err:
        print(f"domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as err:
        print(f"I/O error: bad config file: {err}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, OverflowError) as err:
        print(f"domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK
