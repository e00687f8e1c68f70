"""Critical density ``a = b = 1``: dual and tight windows.

At ``a = b = 1`` the frame operator acts in the Zak domain as multiplication
by ``|Zg|^2``.  Formally the canonical dual and tight windows are

    g_d(t) = int_0^1 d nu / conj(Zg(t, nu)),
    g_t(t) = int_0^1 Zg(t, nu) / |Zg(t, nu)| d nu.

For both windows considered here ``Zg(t, .)`` vanishes only when ``t`` is a
half-integer (at ``nu = 1/2``), so the integrals are evaluated only for ``t``
at least ``eps_half`` away from ``Z + 1/2``.  The dual integral is formal:
``(g, 1, 1)`` is not a frame, and the dual is bounded but not in any L^p,
p < inf.  Nothing here regularizes that; points near half-integers are
simply refused.

The integrands are smooth and 1-periodic in ``nu`` for admissible ``t``, so the
periodic trapezoid rule converges geometrically, at a rate set by how close
the nearest Zak zero sits to the real ``nu`` axis (about ``gamma`` times the
distance from ``t`` to the half-integers).  Quadrature uses the direct Zak
series, independent of the theta closed forms.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, QuadratureNotConverged, TooCloseToHalfInteger
from .theta import ThetaNome, theta1_prime0, theta_eval
from .windows import WindowKind, WindowSpec
from .zak import zak_closed, zak_direct

EPS_HALF = 1e-3
N_QUAD = 512
MAX_QUAD = 1 << 16
QUAD_TOL = 1e-8
ROUNDING_FLOOR = 64 * np.finfo(float).eps

_NOME_1 = ThetaNome.from_gamma(1.0)


def half_integer_distance(t):
    t = np.asarray(t, dtype=float)
    return np.abs(t - np.floor(t) - 0.5)


def _check_admissible(t, eps_half):
    if half_integer_distance(t) < eps_half:
        raise TooCloseToHalfInteger(f"t={t!r} lies within {eps_half:g} of a half-integer")


def zz_scalar(w, t, nu):
    """The 1x1 Zibulski-Zeevi matrix ``|Zg(t, nu)|^2`` (closed-form Zak)."""
    out = np.abs(np.asarray(zak_closed(w, t, nu))) ** 2
    return float(out) if out.ndim == 0 else out


class QuadResult(NamedTuple):
    value: complex
    n_quad: int
    converged: bool
    change: float


def periodic_trapezoid(f, n=N_QUAD, tol=QUAD_TOL, max_n=MAX_QUAD):
    """Integrate a 1-periodic ``f`` over [0, 1) with doubling until stable.

    Each doubling reuses the previous nodes.  Stops when successive results
    differ by at most ``tol`` relative, or by no more than rounding noise
    (``ROUNDING_FLOOR`` times the mean of ``|f|``, for integrals that vanish),
    or when ``max_n`` nodes are reached.
    """
    if n < 2:
        raise ValueError("need at least 2 quadrature nodes")
    vals = f(np.arange(n) / n)
    total, mag = np.sum(vals), np.sum(np.abs(vals))
    value = total / n
    while True:
        vals = f((np.arange(n) + 0.5) / n)
        total, mag = total + np.sum(vals), mag + np.sum(np.abs(vals))
        n *= 2
        new = total / n
        step = abs(new - value)
        change = step / max(abs(new), 1e-300)
        value = new
        if change <= tol or step <= ROUNDING_FLOOR * mag / n:
            return QuadResult(complex(value), n, True, float(change))
        if n >= max_n:
            return QuadResult(complex(value), n, False, float(change))


def dual_quadrature(w, t, n_quad=N_QUAD, eps_half=EPS_HALF, tol=QUAD_TOL, max_quad=MAX_QUAD):
    """Quadrature of the formal dual integral; returns the full :class:`QuadResult`."""
    _check_admissible(t, eps_half)
    return periodic_trapezoid(lambda nu: 1.0 / np.conj(zak_direct(w, t, nu)), n_quad, tol, max_quad)


def dual_numeric(w, t, n_quad=N_QUAD, eps_half=EPS_HALF, tol=QUAD_TOL, max_quad=MAX_QUAD):
    """Canonical dual window at critical density, by quadrature.

    Raises
    ------
    TooCloseToHalfInteger
    QuadratureNotConverged
        if doubling from ``n_quad`` up to ``max_quad`` nodes never settles
        within ``tol``.
    """
    res = dual_quadrature(w, t, n_quad, eps_half, tol, max_quad)
    if not res.converged:
        raise QuadratureNotConverged(
            f"dual integral at t={t!r} still moved by {res.change:.2e} at {res.n_quad} nodes"
        )
    return res.value.real


def dual_sech_closed(t_frac, n, eps_half=EPS_HALF):
    """Closed form of the secant's dual (gamma = 1) at ``t_frac + n``.

    ``2^(1/2) (-1)^n theta4(pi t)^2 e^{2 pi t^2 + 2 pi n t}
    / (pi^(1/2) theta1'(0)^2 cosh(pi (t + n)))``, nome ``e^{-pi}``,
    for ``|t_frac| < 1/2``.
    """
    t = float(t_frac)
    n = int(n)
    if abs(t) >= 0.5 - eps_half:
        raise DomainError(f"t_frac={t!r} must satisfy |t_frac| < 1/2 - {eps_half:g}")
    th4 = theta_eval(4, math.pi * t, _NOME_1).real
    t1p = theta1_prime0(_NOME_1)
    sign = -1.0 if n % 2 else 1.0
    # e^{2 pi t^2 + 2 pi n t} / cosh(pi (t+n)), written to avoid overflow for large |n|
    x = math.pi * (t + n)
    ratio = 2.0 * math.exp(2 * math.pi * t * t + 2 * math.pi * n * t - abs(x)) / (1.0 + math.exp(-2 * abs(x)))
    return sign * math.sqrt(2.0) * th4 * th4 * ratio / (math.sqrt(math.pi) * t1p * t1p)


def dual_sech_closed_at(t, eps_half=EPS_HALF):
    """:func:`dual_sech_closed` for an absolute ``t``."""
    n = math.floor(t + 0.5)
    return dual_sech_closed(t - n, n, eps_half)


def dual_gauss_series(t, eps_half=EPS_HALF):
    """Theta-type series for the Gaussian's dual (gamma = 1).

    ``2^(-1/4) / theta1'(0) e^{pi t^2} sum_{n - 1/2 >= |t|} (-1)^n e^{-pi (n - 1/2)^2}``,
    nome ``e^{-pi}``.  Against the defining integral (:func:`dual_numeric`)
    this expression comes out at exactly ``-1/2`` times the dual at every
    admissible ``t`` checked.  The expression is left as stated so the
    discrepancy stays visible.
    """
    t = float(t)
    _check_admissible(t, eps_half)
    n = math.ceil(abs(t) + 0.5)
    acc = 0.0
    terms = []
    while True:
        term = math.exp(math.pi * t * t - math.pi * (n - 0.5) ** 2)
        terms.append(-term if n % 2 else term)
        if term < 1e-18:
            break
        n += 1
    for term in reversed(terms):
        acc += term
    return 2.0**-0.25 / theta1_prime0(_NOME_1) * acc


def tight_quadrature(w, t, n_quad=N_QUAD, eps_half=EPS_HALF, tol=QUAD_TOL, max_quad=MAX_QUAD):
    _check_admissible(t, eps_half)

    def f(nu):
        z = zak_direct(w, t, nu)
        return z / np.abs(z)

    return periodic_trapezoid(f, n_quad, tol, max_quad)


def tight_window(w, t, n_quad=N_QUAD, eps_half=EPS_HALF, tol=QUAD_TOL, max_quad=MAX_QUAD):
    """Canonical tight window at critical density, by quadrature of ``Zg/|Zg|``."""
    res = tight_quadrature(w, t, n_quad, eps_half, tol, max_quad)
    if not res.converged:
        raise QuadratureNotConverged(
            f"tight-window integral at t={t!r} still moved by {res.change:.2e} at {res.n_quad} nodes"
        )
    return res.value.real


def profile_grid(lo=-3.0, hi=3.0, n=200, eps_half=EPS_HALF):
    """``linspace(lo, hi, n)`` with points near half-integers removed."""
    t = np.linspace(lo, hi, n)
    return t[half_integer_distance(t) >= eps_half]


@dataclass
class SampledProfile:
    t_values: np.ndarray
    values: np.ndarray
    eps_half: float = EPS_HALF
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t_values = np.asarray(self.t_values, dtype=float)
        self.values = np.asarray(self.values)
        if np.any(half_integer_distance(self.t_values) < self.eps_half):
            raise TooCloseToHalfInteger("profile contains points inside the half-integer exclusion")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("profile values must be finite")

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "value"])
        for tv, v in zip(self.t_values, self.values):
            writer.writerow([format(float(tv), ".17g"), format(float(np.real(v)), ".17g")])
        return buf.getvalue()

    def to_dict(self):
        return {
            "eps_half": self.eps_half,
            "meta": self.meta,
            "t": self.t_values.tolist(),
            "value": np.real(self.values).astype(float).tolist(),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(np.asarray(d["t"]), np.asarray(d["value"]), d["eps_half"], d["meta"])


def tight_profile(w, ts, n_quad=N_QUAD, eps_half=EPS_HALF):
    values = np.array([tight_window(w, float(t), n_quad, eps_half) for t in ts])
    return SampledProfile(ts, values, eps_half, {"window": w.kind.value, "gamma": w.gamma, "n_quad": n_quad})


def dual_profile(w, ts, n_quad=N_QUAD, eps_half=EPS_HALF):
    values = np.array([dual_numeric(w, float(t), n_quad, eps_half) for t in ts])
    return SampledProfile(ts, values, eps_half, {"window": w.kind.value, "gamma": w.gamma, "n_quad": n_quad})


def discrete_l2(values, ts):
    """``sqrt(h * sum |values|^2)`` with ``h`` the nominal spacing of ``ts``."""
    ts = np.asarray(ts, dtype=float)
    h = (ts[-1] - ts[0]) / (len(ts) - 1)
    return float(math.sqrt(h * np.sum(np.abs(values) ** 2)))


def tight_equality_check(gamma, ts=None, n_quad=N_QUAD, eps_half=EPS_HALF):
    """Discrete L2 distance between the tight windows of the Gaussian and the secant."""
    ts = profile_grid(eps_half=eps_half) if ts is None else np.asarray(ts, dtype=float)
    g1 = tight_profile(WindowSpec(WindowKind.GAUSSIAN, gamma), ts, n_quad, eps_half).values
    g2 = tight_profile(WindowSpec(WindowKind.SECH, gamma), ts, n_quad, eps_half).values
    return discrete_l2(g1 - g2, ts)


def sinc_pi(t):
    """``sin(pi t) / (pi t)``."""
    return np.sinc(t)


def indicator_half(t):
    """Indicator of the open interval (-1/2, 1/2)."""
    return (np.abs(np.asarray(t, dtype=float)) < 0.5).astype(float)


class LimitDistance(NamedTuple):
    gamma: float
    to_sinc: float
    to_indicator: float


def limit_profiles(gammas, ts=None, kind=WindowKind.GAUSSIAN, n_quad=N_QUAD, eps_half=EPS_HALF):
    """Distances from the tight window at each gamma to sinc(pi t) and to the Haar box."""
    ts = profile_grid(eps_half=eps_half) if ts is None else np.asarray(ts, dtype=float)
    out = []
    for g in gammas:
        prof = tight_profile(WindowSpec(kind, g), ts, n_quad, eps_half).values
        out.append(LimitDistance(float(g), discrete_l2(prof - sinc_pi(ts), ts),
                                 discrete_l2(prof - indicator_half(ts), ts)))
    return out
