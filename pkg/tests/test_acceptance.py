"""Acceptance criteria, one test per criterion.

Each test prints a ``CRITERION n: PASS/FAIL`` line; the lines are repeated
in the terminal summary.
"""

import math
import os
import subprocess
import sys

import numpy as np
from scipy.optimize import minimize_scalar

from sechgabor.critical import (
    dual_gauss_series,
    dual_numeric,
    dual_sech_closed,
    half_integer_distance,
    limit_profiles,
    profile_grid,
    tight_equality_check,
)
from sechgabor.factorization import verify_theorem1
from sechgabor.framebounds import analytic_lower_bound, frame_bounds_estimate, m_delta
from sechgabor.theta import ThetaNome, theta1_prime0, theta3_modular, theta_eval
from sechgabor.windows import LatticeParams, WindowKind, WindowSpec, gaussian, sech
from sechgabor.zak import zak_closed, zak_direct


def test_criterion_01_factorization_residual(criterion):
    res = {g: verify_theorem1(g, 64, 64).max_rel_residual for g in (0.25, 0.5, 1.0, 2.0, 4.0)}
    worst = max(res.values())
    detail = ", ".join(f"gamma={g:g}: {r:.2e}" for g, r in res.items())
    criterion(1, worst < 1e-9, f"max_rel_residual < 1e-9 ({detail})")


def test_criterion_02_theta_identities(criterion):
    rng = np.random.default_rng(44)
    prod = 0.0
    for q in rng.uniform(0.001, 0.9, 20):
        n = ThetaNome(q)
        lhs = theta1_prime0(n)
        rhs = (theta_eval(2, 0, n) * theta_eval(3, 0, n) * theta_eval(4, 0, n)).real
        prod = max(prod, abs(lhs - rhs) / abs(rhs))

    shift = 0.0
    x = np.linspace(-2 * math.pi, 2 * math.pi, 1001)
    for q in (0.01, math.exp(-math.pi), 0.5, 0.9):
        a = theta_eval(3, x, q)
        b = theta_eval(4, x + math.pi / 2, q)
        shift = max(shift, float(np.max(np.abs(a - b)) / np.max(np.abs(a))))

    modular = 0.0
    for g in (0.5, 1.0, 2.0):
        for t in (0.0, 0.3, 0.49):
            chk = theta3_modular(t, g)
            modular = max(modular, abs(chk.diff) / abs(chk.lhs))

    ok = prod < 1e-12 and shift < 1e-13 and modular < 1e-11
    criterion(2, ok, f"product identity {prod:.2e} (<1e-12), half-period shift {shift:.2e} (<1e-13), "
                     f"imaginary transformation {modular:.2e} (<1e-11)")


def test_criterion_03_zak_cross_method(criterion):
    n = 64
    t = np.arange(n) / n
    T, V = np.meshgrid(t, t, indexing="ij")
    cross = quasi = 0.0
    for kind in (WindowKind.GAUSSIAN, WindowKind.SECH):
        for g in (0.5, 1.0, 2.0):
            w = WindowSpec(kind, g)
            d = zak_direct(w, T, V)
            c = zak_closed(w, T, V)
            scale = np.max(np.abs(d))
            cross = max(cross, float(np.max(np.abs(d - c)) / scale))
            ph = np.exp(2j * np.pi * V)
            for f in (zak_direct, zak_closed):
                quasi = max(quasi, float(np.max(np.abs(f(w, T + 1, V) - ph * f(w, T, V))) / scale))
                quasi = max(quasi, float(np.max(np.abs(f(w, T, V + 1) - f(w, T, V))) / scale))
    criterion(3, cross < 1e-11 and quasi < 1e-13,
              f"closed vs direct {cross:.2e} (<1e-11), quasi-periodicity {quasi:.2e} (<1e-13)")


def test_criterion_04_frame_bound_sandwich(criterion):
    parts, ok = [], True
    for a in ("1/2", "2/3", "3/4"):
        lat = LatticeParams.parse(a, a)
        rep = frame_bounds_estimate(sech(1), lat)
        lb = analytic_lower_bound(1.0, lat, check_convergence=False)
        good = rep.A_est > 0 and math.isfinite(rep.B_est) and rep.converged and lb <= rep.A_est + 1e-6
        ok &= good
        parts.append(f"a=b={a}: A_est={rep.A_est:.6f} B_est={rep.B_est:.6f} converged={rep.converged} "
                     f"analytic={lb:.6f}")
    criterion(4, ok, "; ".join(parts))


def test_criterion_05_critical_density(criterion):
    parts, ok = [], True
    lat = LatticeParams.parse("1", "1")
    for w in (sech(1), gaussian(1)):
        coarse = frame_bounds_estimate(w, lat, t_grid=256, check_convergence=False).A_est
        fine = frame_bounds_estimate(w, lat, t_grid=1024, check_convergence=False).A_est
        ok &= coarse < 1e-2 and fine < coarse
        parts.append(f"{w}: A_est(256)={coarse:.3e} A_est(1024)={fine:.3e}")
    criterion(5, ok, "; ".join(parts))


def test_criterion_06_dual_closed_forms(criterion):
    ts = np.linspace(-2.45, 2.45, 50)
    assert len(ts) == 50 and np.all(half_integer_distance(ts) >= 1e-3)
    sech_err = gauss_err = 0.0
    signs_ok = True
    ratios = []
    for t in ts:
        n = math.floor(t + 0.5)
        closed = dual_sech_closed(t - n, n)
        num = dual_numeric(sech(1), t)
        sech_err = max(sech_err, abs(closed - num) / abs(num))
        signs_ok &= np.sign(closed) == (-1) ** n
        gnum = dual_numeric(gaussian(1), t)
        gser = dual_gauss_series(t)
        gauss_err = max(gauss_err, abs(gser - gnum) / abs(gnum))
        ratios.append(gser / gnum)
    ok = sech_err < 1e-8 and gauss_err < 1e-8 and signs_ok
    criterion(6, ok, f"secant closed form {sech_err:.2e} (<1e-8), sign pattern {'ok' if signs_ok else 'broken'}, "
                     f"Gaussian series {gauss_err:.2e} (<1e-8; series/quadrature ratio in "
                     f"[{min(ratios):.12f}, {max(ratios):.12f}])")


def test_criterion_07_tight_window_equality(criterion):
    ts = profile_grid()
    assert len(ts) == 200
    d = {g: tight_equality_check(g, ts) for g in (0.5, 1.0, 2.0)}
    criterion(7, max(d.values()) < 1e-6, ", ".join(f"gamma={g:g}: {v:.2e}" for g, v in d.items()) + " (<1e-6)")


def test_criterion_08_limit_trends(criterion):
    res = {x.gamma: x for x in limit_profiles([0.25, 0.5, 1.0, 2.0, 4.0])}
    sinc = [res[g].to_sinc for g in (1.0, 0.5, 0.25)]
    box = [res[g].to_indicator for g in (1.0, 2.0, 4.0)]
    ok = sinc[0] > sinc[1] > sinc[2] and box[0] > box[1] > box[2]
    criterion(8, ok, "to sinc over gamma 1,1/2,1/4: " + ", ".join(f"{v:.4f}" for v in sinc)
              + "; to indicator over gamma 1,2,4: " + ", ".join(f"{v:.4f}" for v in box))


def _grid_min(delta):
    nome = ThetaNome.from_gamma(delta)
    f = lambda x: 1.0 / theta_eval(4, x, nome).real ** 2
    x = np.linspace(0.0, math.pi, 100_001)
    vals = f(x)
    i = int(np.argmin(vals))
    h = x[1] - x[0]
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]
    ref = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return min(float(vals[i]), float(ref.fun)), h


def test_criterion_09_m_delta(criterion):
    worst = 0.0
    for d in (0.25, 0.5, 1.0, 2.0, 4.0):
        oracle, _ = _grid_min(d)
        worst = max(worst, abs(m_delta(d) - oracle) / oracle)
    criterion(9, worst < 1e-10, f"max relative difference to grid minimization {worst:.2e} (<1e-10)")


def _cli(args, threads, tmp_path, tag):
    out = tmp_path / f"{tag}.out"
    env = dict(os.environ, GSL_THREADS=str(threads))
    proc = subprocess.run([sys.executable, "-m", "sechgabor", *args, "--out", str(out)],
                          env=env, capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    return out.read_bytes()


def test_criterion_10_determinism(criterion, tmp_path):
    runs = {
        "verify": ["verify-identity", "--gamma", "1", "--grid", "32"],
        "zak": ["zak", "--window", "sech", "--gamma", "0.5", "--grid", "16", "--method", "direct"],
        "fb": ["frame-bounds", "--a", "2/3", "--b", "2/3", "--grid", "32", "--trunc", "128", "--format", "csv"],
        "dual": ["dual", "--window", "gauss", "--gamma", "1", "--format", "json"],
        "tight": ["tight", "--window", "sech", "--gamma", "2"],
    }
    bad = []
    for tag, args in runs.items():
        outs = [_cli(args, th, tmp_path, f"{tag}{i}") for i, th in enumerate((1, 1, 4))]
        if not (outs[0] == outs[1] == outs[2]):
            bad.append(tag)
    criterion(10, not bad, f"{len(runs)} subcommands x 3 runs (GSL_THREADS 1, 1, 4) byte-identical"
              + (f"; differing: {bad}" if bad else ""))
