"""Command-line front end.

Every subcommand writes one artifact (CSV or JSON) to ``--out`` or stdout;
diagnostics go to stderr.  Exit status: 0 success, 1 computation error,
2 usage error.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import critical, factorization, framebounds, zak
from .errors import GaborError, UsageError
from .theta import ThetaKind, ThetaNome, theta1_prime0, theta_eval
from .windows import LatticeParams, WindowKind, WindowSpec

SUBCOMMANDS = ("theta", "zak", "verify-identity", "frame-bounds", "dual", "tight", "limits")


@dataclass
class RunConfig:
    subcommand: str
    gamma: float = 1.0
    a: Fraction = Fraction(1, 2)
    b: Fraction = Fraction(1, 2)
    window: str = "sech"
    grid_t: int = None
    grid_nu: int = None
    trunc: int = None
    quad: int = critical.N_QUAD
    eps_half: float = critical.EPS_HALF
    tol: float = None
    out: str = None
    format: str = None
    json_errors: bool = False
    extra: dict = field(default_factory=dict)


def _rational(text):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational p/q") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0 or not np.isfinite(value):
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated list of numbers") from None
    if not values or any(not v > 0 for v in values):
        raise argparse.ArgumentTypeError(f"{text!r} must list positive numbers")
    return values


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises :class:`UsageError` instead of exiting."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the artifact here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), help="artifact format")
    common.add_argument("--json-errors", action="store_true", help="report failures as JSON on stderr")
    common.add_argument("--gamma", type=_positive_float, default=1.0, help="window scaling parameter")
    common.add_argument("--tol", type=_positive_float, help="pass/fail or convergence tolerance")

    windowed = argparse.ArgumentParser(add_help=False)
    windowed.add_argument("--window", choices=("sech", "gauss", "gaussian"), default="sech")

    gridded = argparse.ArgumentParser(add_help=False)
    gridded.add_argument("--grid", type=_positive_int, help="resolution for both grid axes")
    gridded.add_argument("--grid-t", type=_positive_int)
    gridded.add_argument("--grid-nu", type=_positive_int)

    quad = argparse.ArgumentParser(add_help=False)
    quad.add_argument("--t", type=float, help="single evaluation point (default: profile on [-3, 3])")
    quad.add_argument("--quad", type=_positive_int, default=critical.N_QUAD, help="initial quadrature nodes")
    quad.add_argument("--eps-half", type=_positive_float, default=critical.EPS_HALF,
                      help="exclusion radius around half-integers")

    parser = _Parser(prog="sechgabor", description="Gabor frames of the hyperbolic secant")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("theta", parents=[common], help="evaluate a Jacobi theta function")
    p.add_argument("--kind", type=int, choices=(1, 2, 3, 4), default=4)
    p.add_argument("--z", type=complex, default=0j, help="argument, e.g. 0.3+0.1j")
    p.add_argument("--q", type=float, help="nome in (0, 1); default exp(-pi*gamma)")

    p = sub.add_parser("zak", parents=[common, windowed, gridded], help="Zak transform on the unit cell")
    p.add_argument("--method", choices=("closed", "direct"), default="closed")
    p.add_argument("--trunc", type=_positive_int, help="series truncation for --method direct")
    p.add_argument("--half-offset", action="store_true", help="shift the grid by half a cell")

    sub.add_parser("verify-identity", parents=[common, gridded], help="residual of the secant/Gaussian Zak identity")

    p = sub.add_parser("frame-bounds", parents=[common, windowed, gridded], help="Ron-Shen frame bound estimate")
    p.add_argument("--a", type=_rational, default=Fraction(1, 2), help="time step p/q")
    p.add_argument("--b", type=_rational, default=Fraction(1, 2), help="frequency step p/q")
    p.add_argument("--trunc", type=_positive_int, help="row truncation L_row")

    sub.add_parser("dual", parents=[common, windowed, quad], help="critical-density dual window")
    sub.add_parser("tight", parents=[common, windowed, quad], help="critical-density tight window")

    p = sub.add_parser("limits", parents=[common, windowed, quad], help="distances of tight windows to sinc and box")
    p.add_argument("--gammas", type=_float_list, default=[4.0, 2.0, 1.0, 0.5, 0.25])
    return parser


def parse_args(argv):
    parser = build_parser()
    ns = parser.parse_args(argv)
    threads = os.environ.get("GSL_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            raise UsageError(f"environment variable GSL_THREADS={threads!r} must be a positive integer")
    d = vars(ns).copy()
    grid = d.pop("grid", None)
    cfg = RunConfig(subcommand=d.pop("subcommand"))
    cfg.gamma = d.pop("gamma")
    cfg.tol = d.pop("tol")
    cfg.out = d.pop("out")
    cfg.format = d.pop("format")
    cfg.json_errors = d.pop("json_errors")
    window = d.pop("window", "sech")
    cfg.window = "gaussian" if window in ("gauss", "gaussian") else "sech"
    cfg.grid_t = d.pop("grid_t", None) or grid
    cfg.grid_nu = d.pop("grid_nu", None) or grid
    for name in ("a", "b", "trunc", "quad", "eps_half"):
        if name in d:
            setattr(cfg, name, d.pop(name))
    cfg.extra = d
    return cfg


def _window(cfg):
    return WindowSpec(WindowKind(cfg.window), cfg.gamma)


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _run_theta(cfg):
    nome = ThetaNome(cfg.extra["q"]) if cfg.extra.get("q") is not None else ThetaNome.from_gamma(cfg.gamma)
    kind = ThetaKind(cfg.extra["kind"])
    z = cfg.extra["z"]
    v = theta_eval(kind, z, nome)
    rec = {"kind": int(kind), "q": nome.q, "z_re": z.real, "z_im": z.imag,
           "re": v.real, "im": v.imag, "theta1_prime0": theta1_prime0(nome)}
    if cfg.format == "csv":
        return _csv(list(rec), [list(rec.values())]), None
    return _json(rec), None


def _run_zak(cfg):
    w = _window(cfg)
    n_t = cfg.grid_t or 32
    n_nu = cfg.grid_nu or 32
    off_t = zak.half_offset(n_t) if cfg.extra["half_offset"] else 0.0
    off_nu = zak.half_offset(n_nu) if cfg.extra["half_offset"] else 0.0
    field_ = zak.zak_grid(w, n_t, n_nu, off_t, off_nu, method=cfg.extra["method"], l_max=cfg.trunc)
    return (field_.to_csv() if cfg.format == "csv" else field_.to_json()), None


def _run_verify(cfg):
    tol = cfg.tol or 1e-9
    rep = factorization.verify_theorem1(cfg.gamma, cfg.grid_t or 64, cfg.grid_nu or 64)
    ok = rep.passed(tol)
    line = (f"{'PASS' if ok else 'FAIL'} verify-identity gamma={cfg.gamma:g} "
            f"max_rel_residual={rep.max_rel_residual:.3e} tol={tol:g}")
    d = rep.to_dict()
    d["tol"], d["passed"] = tol, ok
    if cfg.format == "csv":
        keys = ["gamma", "E_claimed", "max_abs_residual", "max_rel_residual", "residual_at_center",
                "rank1_defect", "tol", "passed"]
        return _csv(keys, [[d[k] for k in keys]]), line
    return _json(d), line


def _run_frame_bounds(cfg):
    w = _window(cfg)
    lat = LatticeParams(cfg.a, cfg.b)
    kw = {"t_grid": cfg.grid_t or framebounds.DEFAULT_T_GRID,
          "L_row": cfg.trunc or framebounds.DEFAULT_L_ROW}
    if cfg.tol is not None:
        kw["conv_tol"] = cfg.tol
    rep = framebounds.frame_bounds_estimate(w, lat, **kw)
    if w.kind == WindowKind.SECH and lat.density < 1:
        rep.A_analytic = framebounds.analytic_lower_bound(w.gamma, lat, **kw)
    line = (f"frame-bounds {w} a={lat.a} b={lat.b}: A_est={rep.A_est:.6g} B_est={rep.B_est:.6g} "
            f"converged={rep.converged}")
    if rep.note:
        line += f" ({rep.note})"
    if cfg.format == "csv":
        row = rep.table_row()
        return _csv(list(row), [list(row.values())]), line
    return rep.to_json(), line


def _profile_points(cfg):
    if cfg.extra.get("t") is not None:
        return np.array([cfg.extra["t"]])
    return critical.profile_grid(eps_half=cfg.eps_half)


def _run_dual(cfg):
    w = _window(cfg)
    ts = _profile_points(cfg)
    prof = critical.dual_profile(w, ts, cfg.quad, cfg.eps_half)
    if w.gamma == 1.0:
        if w.kind == WindowKind.SECH:
            prof.meta["closed_form"] = [critical.dual_sech_closed_at(t, cfg.eps_half) for t in ts]
        else:
            prof.meta["series_form"] = [critical.dual_gauss_series(t, cfg.eps_half) for t in ts]
    return (prof.to_csv() if cfg.format == "csv" else prof.to_json()), None


def _run_tight(cfg):
    prof = critical.tight_profile(_window(cfg), _profile_points(cfg), cfg.quad, cfg.eps_half)
    return (prof.to_csv() if cfg.format == "csv" else prof.to_json()), None


def _run_limits(cfg):
    ts = critical.profile_grid(eps_half=cfg.eps_half)
    dists = critical.limit_profiles(cfg.extra["gammas"], ts, WindowKind(cfg.window), cfg.quad, cfg.eps_half)
    rows = [[d.gamma, d.to_sinc, d.to_indicator] for d in dists]
    if cfg.format == "csv":
        return _csv(["gamma", "to_sinc", "to_indicator"], rows), None
    return _json({"window": cfg.window, "grid_points": len(ts),
                  "distances": [dict(zip(("gamma", "to_sinc", "to_indicator"), r)) for r in rows]}), None


_RUNNERS = {
    "theta": _run_theta,
    "zak": _run_zak,
    "verify-identity": _run_verify,
    "frame-bounds": _run_frame_bounds,
    "dual": _run_dual,
    "tight": _run_tight,
    "limits": _run_limits,
}

# CSV by default for sampled data, JSON for reports
_DEFAULT_FORMAT = {"zak": "csv", "dual": "csv", "tight": "csv", "limits": "csv"}


def run(cfg, stdout=None, stderr=None):
    """Execute a parsed configuration; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    if cfg.format is None:
        cfg.format = _DEFAULT_FORMAT.get(cfg.subcommand, "json")
    try:
        text, line = _RUNNERS[cfg.subcommand](cfg)
    except (GaborError, ValueError, ArithmeticError) as exc:
        if cfg.json_errors:
            stderr.write(_json({"error": type(exc).__name__, "message": str(exc), "subcommand": cfg.subcommand}))
        else:
            stderr.write(f"sechgabor {cfg.subcommand}: {type(exc).__name__}: {exc}\n")
        return 1
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if line:
        stderr.write(line + "\n")
    return 0


def main(argv=None):
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return exc.exit_code
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
