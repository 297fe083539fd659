"""Command-line front end.

Every subcommand writes plot-ready CSV or JSON. Numbers are printed in
scientific notation with 12 significant digits; CSV headers carry the
resolved configuration as '#' comments. Exit status is 0 on success, 1
on usage or configuration errors and 2 on domain errors (singular
designer target, dark port).
"""
import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .amplitudes import (
    DesignTarget,
    PathSet,
    QubitState,
    amplitudes_from_states,
    check_conservation,
    design_states,
    design_symmetric,
)
from .analysis import (
    LarmorConfig,
    compare_profiles,
    complex_time,
    contour_grid,
    infer_tau_inside,
    larmor_angle,
    scan_window,
    width_scan,
)
from .density import (
    DensityProfile,
    TwoPathConfig,
    asymptotic_peak,
    density_d1,
    detection_probability,
)
from .errors import DomainError, MziLabError
from .wavepacket import GaussianPacket

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2
MIN_RESOLUTION = 256
THREADS_ENV = "MZI_LAB_THREADS"

DEFAULTS = {
    "velocity": 1.0,
    "delay": 1.0,
    "format": None,
    "output": None,
    "n_grid": 2048,
    "delta_x": 5.0,
    "ladder": None,
    "port": 1,
    "normalized": False,
    "tau": 0.0,
    "v": 1.0,
    "omega": 1.0,
    "tau1": 0.0,
    "tau2": 1.0,
}
DEFAULT_LADDER = tuple(np.geomspace(0.1, 50.0, 20))


class UsageError(MziLabError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x):
    return f"{x:.11e}"


def _dump(obj):
    """JSON text with every float in 12-significant-digit scientific notation."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt(x) if math.isfinite(x) else json.dumps(str(x))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, complex):
        return _dump({"re": obj.real, "im": obj.imag})
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _complex_list(text, n=None, name="value"):
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [s for s in str(text).split(",") if s.strip()]
    try:
        vals = [complex(v.strip().replace(" ", "")) if isinstance(v, str) else complex(v) for v in items]
    except ValueError:
        raise UsageError(f"cannot parse {name} {text!r} as comma-separated complex numbers") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"{name} needs {n} values, got {len(vals)}")
    return vals


def _float_list(text, name):
    if isinstance(text, (list, tuple)):
        items = text
    else:
        items = [s for s in str(text).split(",") if s.strip()]
    try:
        return [float(v) for v in items]
    except ValueError:
        raise UsageError(f"cannot parse {name} {text!r} as comma-separated numbers") from None


def _state(text, name):
    c1, c2 = _complex_list(text, 2, name)
    return QubitState.from_components(c1, c2)


def _resolve(ns):
    """Merge built-in defaults, the optional JSON config file and explicit flags."""
    cfg = dict(DEFAULTS)
    if ns.config:
        try:
            with open(ns.config) as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {ns.config!r}: {exc}") from None
        if not isinstance(from_file, dict):
            raise UsageError("config file must hold a JSON object")
        cfg.update({k.replace("-", "_"): v for k, v in from_file.items()})
    cfg.update({k: v for k, v in vars(ns).items() if v is not None and k != "config"})
    cfg["command"] = ns.command
    return cfg


def _vtau(cfg):
    v, delay = float(cfg["velocity"]), float(cfg["delay"])
    if v <= 0 or delay < 0:
        raise UsageError("velocity must be > 0 and delay >= 0")
    return v * delay


def _target(cfg):
    if cfg.get("z") is None:
        return None
    y = cfg.get("y")
    y = -_vtau(cfg) if y is None else float(y)
    try:
        return DesignTarget(y, float(cfg["z"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _pathset(cfg):
    """Build the PathSet from exactly one amplitude source."""
    sources = [
        cfg.get("amplitudes") is not None,
        cfg.get("z") is not None and cfg.get("post1") is None,
        cfg.get("post1") is not None or cfg.get("post2") is not None,
    ]
    if sum(sources) != 1:
        raise UsageError("give exactly one amplitude source: --amplitudes, --z [--y] [--pre], or --pre/--post1/--post2")
    if sources[0]:
        vals = _complex_list(cfg["amplitudes"], name="amplitudes")
        if len(vals) not in (2, 4):
            raise UsageError("--amplitudes needs 2 or 4 values")
        return PathSet(*vals), {"source": "explicit"}
    if sources[1]:
        target = _target(cfg)
        if cfg.get("pre") is None:
            return design_symmetric(target), {"source": "symmetric", "y": target.y, "z": target.z}
        pre = _state(cfg["pre"], "pre")
        d1, d2 = design_states(pre, target)
        info = {"source": "states", "y": target.y, "z": target.z, "pre": [pre.c1, pre.c2],
                "post1": [d1.c1, d1.c2], "post2": [d2.c1, d2.c2]}
        return amplitudes_from_states(pre, d1, d2), info
    if cfg.get("pre") is None or cfg.get("post1") is None or cfg.get("post2") is None:
        raise UsageError("state source needs --pre, --post1 and --post2")
    pre, d1, d2 = (_state(cfg[k], k) for k in ("pre", "post1", "post2"))
    return amplitudes_from_states(pre, d1, d2), {"source": "states"}


def _port_config(cfg, paths, delta_x):
    packet = GaussianPacket(float(delta_x), velocity=float(cfg["velocity"]))
    return TwoPathConfig.for_port(paths, int(cfg["port"]), packet, float(cfg["delay"]))


def _resolution(cfg):
    n = int(cfg["n_grid"])
    if n < MIN_RESOLUTION:
        raise UsageError(f"--n-grid must be >= {MIN_RESOLUTION}")
    return n


def _header(cfg):
    shown = {k: v for k, v in sorted(cfg.items()) if k not in ("output", "format")}
    return f"# mzi-lab {__version__}\n# config: {_dump(shown)}\n"


def _emit(text, cfg):
    if cfg.get("output"):
        with open(cfg["output"], "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, columns):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def cmd_design(cfg):
    paths, info = _pathset(cfg)
    path_res, port_res = paths.conservation_residuals()
    vtau = _vtau(cfg)
    a1, a2 = paths.port(1)
    xbar = asymptotic_peak(a1, a2, vtau) if a1 + a2 != 0 else None
    report = {
        **info,
        "A1": paths.A1, "A2": paths.A2, "A3": paths.A3, "A4": paths.A4,
        "conservation_residual_paths": path_res,
        "conservation_residual_ports": port_res,
        "conserved": check_conservation(paths),
        "port_cross_term": abs(paths.port_cross_term()),
        "vtau": vtau,
        "asymptotic_peak_d1": xbar,
        # full precision so --amplitudes round-trips bit for bit
        "amplitudes": ",".join(repr(a).strip("()") for a in paths.as_tuple()),
    }
    if (cfg["format"] or "json") == "csv":
        rows = [(k, fmt(v.real), fmt(v.imag)) for k, v in zip(("A1", "A2", "A3", "A4"), paths.as_tuple())]
        text = _header(cfg) + f"# conservation_residuals: {fmt(path_res)},{fmt(port_res)}\n"
        if xbar is not None:
            text += f"# asymptotic_peak_d1: {fmt(xbar)}\n"
        text += _csv(rows, ("path", "re", "im"))
    else:
        text = _dump(report) + "\n"
    _emit(text, cfg)


def _ladder(cfg):
    if cfg.get("ladder") is None:
        return list(DEFAULT_LADDER)
    ladder = _float_list(cfg["ladder"], "ladder")
    if not ladder:
        raise UsageError("empty ladder")
    return ladder


def _threads():
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def cmd_scan(cfg):
    paths, _ = _pathset(cfg)
    a1, a2 = paths.port(int(cfg["port"]))
    vtau = _vtau(cfg)
    ladder = _ladder(cfg)
    n = max(_resolution(cfg), 4096)
    try:
        records = width_scan(a1, a2, vtau, ladder, n_grid=n, max_workers=_threads())
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise UsageError(str(exc)) from None
    rows = [
        (r.delta_x, r.peak_x, r.com_x, r.p_detect, str(r.n_minima),
         ";".join(fmt(m) for m in r.minima_x), str(len(r.maxima_x)),
         ";".join(fmt(m) for m in r.maxima_x))
        for r in records
    ]
    cols = ("delta_x", "peak_x", "com_x", "p_detect", "n_minima", "minima_x", "n_maxima", "maxima_x")
    _emit(_header(cfg) + _csv(rows, cols), cfg)
    if cfg.get("full_grid"):
        grid = contour_grid(a1, a2, vtau, ladder, n_x=max(_resolution(cfg) // 4, MIN_RESOLUTION))
        with open(cfg["full_grid"], "w", newline="\n") as fh:
            fh.write(_header(cfg) + _csv(grid, ("x", "delta_x", "P")))


def cmd_compare(cfg):
    paths, _ = _pathset(cfg)
    pc = _port_config(cfg, paths, cfg["delta_x"])
    rep = compare_profiles(pc, n_grid=_resolution(cfg))
    if cfg["normalized"]:
        cols = (rep.exact_normalized, rep.asymptotic_normalized, rep.free)
    else:
        cols = (rep.exact, rep.asymptotic, rep.free)
    summary = {
        "exact_peak": rep.exact_peak,
        "asymptotic_peak": rep.asymptotic_peak,
        "free_peak": pc.packet.center,
        "peak_offset": rep.peak_offset,
        "sup_distance": rep.sup_distance,
        "relative_sup_distance": rep.relative_sup_distance,
        "p_detect": rep.p_detect,
        "fits_under_front_tail": rep.fits_under_front_tail,
    }
    rows = zip(rep.positions, *cols)
    text = _header(cfg) + f"# summary: {_dump(summary)}\n" + _csv(rows, ("x", "exact", "asymptotic", "free"))
    _emit(text, cfg)


def cmd_density(cfg):
    paths, _ = _pathset(cfg)
    pc = _port_config(cfg, paths, cfg["delta_x"])
    n = _resolution(cfg)
    if cfg.get("window") is not None:
        lo, hi = _float_list(cfg["window"], "window")
    else:
        lo, hi = scan_window(pc)
    profile = DensityProfile.sample(lambda t: density_d1(t, pc), np.linspace(lo, hi, n))
    if cfg["normalized"]:
        profile = profile.normalized()
    text = (_header(cfg) + f"# p_detect: {fmt(detection_probability(pc))}\n"
            + f"# normalization: {fmt(profile.normalization)}\n"
            + _csv(zip(profile.positions, profile.values), ("x", "value")))
    _emit(text, cfg)


def cmd_infer(cfg):
    for key in ("L", "xbar"):
        if cfg.get(key) is None:
            raise UsageError(f"infer needs --{key}")
    try:
        res = infer_tau_inside(cfg["L"], cfg["v"], cfg["xbar"], cfg["tau"], cfg.get("eps_t"))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    _emit(_dump({"L": res.L, "v": res.v, "xbar": res.xbar, "tau": res.tau,
                 "tau_inside": res.tau_inside, "classification": res.classification}) + "\n", cfg)


def cmd_larmor(cfg):
    if cfg.get("amplitudes") is not None:
        a = _complex_list(cfg["amplitudes"], name="amplitudes")
        a1, a2 = a[0], a[1]
    else:
        paths, _ = _pathset(cfg)
        a1, a2 = paths.port(int(cfg["port"]))
    lc = LarmorConfig(cfg["tau1"], cfg["tau2"], a1, a2, cfg["omega"])
    phi = larmor_angle(lc)
    _emit(_dump({"A1": a1, "A2": a2, "tau1": lc.tau1, "tau2": lc.tau2, "omega_L": lc.omega_L,
                 "phi": phi, "phi_over_omega": complex_time(lc).real,
                 "complex_time": complex_time(lc)}) + "\n", cfg)


COMMANDS = {
    "design": cmd_design,
    "scan": cmd_scan,
    "compare": cmd_compare,
    "density": cmd_density,
    "infer": cmd_infer,
    "larmor": cmd_larmor,
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file of option values; flags take precedence")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--velocity", type=float, help="packet velocity v (default 1)")
    common.add_argument("--delay", type=float, help="right-arm delay tau (default 1)")

    amps = _Parser(add_help=False)
    amps.add_argument("--amplitudes", help="A1,A2[,A3,A4] as complex literals; use --amplitudes=... for a leading minus")
    amps.add_argument("--y", type=float, help="pointer shift y (default -v*tau)")
    amps.add_argument("--z", type=float, help="target asymptotic peak position")
    amps.add_argument("--pre", help="pre-selected state c1,c2")
    amps.add_argument("--post1", help="post-selected state D1 as c1,c2")
    amps.add_argument("--post2", help="post-selected state D2 as c1,c2")
    amps.add_argument("--port", type=int, choices=(1, 2), help="detector port (default 1)")

    grid = _Parser(add_help=False)
    grid.add_argument("--n-grid", dest="n_grid", type=int, help=f"grid points (>= {MIN_RESOLUTION})")

    parser = _Parser(prog="mzi-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("design", parents=[common, amps], help="path amplitudes and conservation report")

    p = sub.add_parser("scan", parents=[common, amps, grid], help="peak/COM/extrema versus packet width")
    p.add_argument("--ladder", help="comma-separated increasing widths")
    p.add_argument("--full-grid", dest="full_grid", help="also write (x, delta_x, P) rows to this file")

    p = sub.add_parser("compare", parents=[common, amps, grid], help="exact, asymptotic and free profiles")
    p.add_argument("--delta-x", dest="delta_x", type=float, help="packet width (default 5)")
    p.add_argument("--normalized", action="store_true", default=None)

    p = sub.add_parser("density", parents=[common, amps, grid], help="sampled port density")
    p.add_argument("--delta-x", dest="delta_x", type=float, help="packet width (default 5)")
    p.add_argument("--window", help="lo,hi sampling window")
    p.add_argument("--normalized", action="store_true", default=None)

    p = sub.add_parser("infer", parents=[common], help="naive time between the beamsplitters")
    p.add_argument("--L", dest="L", type=float, help="left-arm length between beamsplitters")
    p.add_argument("--v", dest="v", type=float, help="packet velocity (default 1)")
    p.add_argument("--xbar", type=float, help="observed peak advancement")
    p.add_argument("--tau", type=float, help="right-arm delay (default 0)")
    p.add_argument("--eps-t", dest="eps_t", type=float, help="zero-crossing tolerance")

    p = sub.add_parser("larmor", parents=[common, amps], help="Larmor-clock rotation angle")
    p.add_argument("--tau1", type=float, help="time in the field via arm 1 (default 0)")
    p.add_argument("--tau2", type=float, help="time in the field via arm 2 (default 1)")
    p.add_argument("--omega", type=float, help="Larmor frequency (default 1)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        cfg = _resolve(ns)
        COMMANDS[ns.command](cfg)
    except DomainError as exc:
        print(f"mzi-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (MziLabError, ValueError, TypeError, OSError) as exc:
        print(f"mzi-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK
