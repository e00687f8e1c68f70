r"""Zak transforms of the two windows.

.. math:: (Zg)(t, \nu) = \sum_l g(t - l)\, e^{2\pi i l \nu}

``zak_direct`` sums this series; ``zak_gaussian_closed`` and
``zak_sech_closed`` use theta-function closed forms.  The closed forms first
move ``t`` into ``[-1/2, 1/2)`` with ``Zg(t + m, nu) = e^{2 pi i m nu} Zg(t, nu)``
so that the theta arguments stay well inside the admissible strip.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationTooSmall
from .theta import ThetaKind, ThetaNome, theta1_prime0, theta_eval
from .windows import WindowKind, WindowSpec, eval_window

TAIL_TARGET = 1e-15
TAIL_LIMIT = 1e-10


def tail_bound(w, l_max):
    """Bound on the dropped terms of the Zak series centered at ``round(t)``.

    The kept terms are ``|l - round(t)| <= l_max`` so every dropped argument
    satisfies ``|t - l| >= l_max + 1/2``.
    """
    s = l_max + 0.5
    lam = math.pi * w.gamma
    if w.kind == WindowKind.GAUSSIAN:
        # (k - 1/2)^2 >= s^2 + (k - l_max - 1) * (2 l_max + 1) for k > l_max
        return 2.0 * w.peak * math.exp(-lam * s * s) / -math.expm1(-lam * (2 * l_max + 1))
    return 2.0 * 2.0 * w.peak * math.exp(-lam * s) / -math.expm1(-lam)


def default_truncation(w):
    """``ceil(20/(pi gamma)) + 10``, raised until the tail bound is below 1e-15."""
    l_max = math.ceil(20.0 / (math.pi * w.gamma)) + 10
    while tail_bound(w, l_max) > TAIL_TARGET:
        l_max += 1
    return l_max


def _check_truncation(w, l_max):
    if l_max < 1:
        raise TruncationTooSmall(f"truncation {l_max} must be at least 1")
    bound = tail_bound(w, l_max)
    if bound > TAIL_LIMIT:
        raise TruncationTooSmall(
            f"truncation {l_max} leaves a tail bound {bound:.3g} > {TAIL_LIMIT:g} for {w}"
        )


def zak_direct(w, t, nu, l_max=None):
    """Truncated Zak series, summing ``|l - round(t)| <= l_max``.

    ``t`` and ``nu`` broadcast against each other.
    """
    if l_max is None:
        l_max = default_truncation(w)
    _check_truncation(w, l_max)
    t, nu = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(nu, dtype=float))
    m = np.round(t)
    k = np.arange(-l_max, l_max + 1)
    shape = t.shape + (1,)
    tt, mm, vv = t.reshape(shape), m.reshape(shape), nu.reshape(shape)
    l = mm + k
    terms = eval_window(w, tt - l) * np.exp(2j * math.pi * l * vv)
    out = terms.sum(axis=-1)
    return complex(out) if out.ndim == 0 else out


def _unit_cell(t):
    t = np.asarray(t, dtype=float)
    m = np.floor(t + 0.5)
    return t - m, m


def zak_gaussian_closed(gamma, t, nu):
    """``(2 gamma)^(1/4) e^{-pi gamma t^2} theta3(pi (nu - i gamma t); e^{-pi gamma})``."""
    t, nu = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(nu, dtype=float))
    tr, m = _unit_cell(t)
    nome = ThetaNome.from_gamma(gamma)
    th3 = theta_eval(ThetaKind.THETA3, math.pi * (nu - 1j * gamma * tr), nome)
    out = (2.0 * gamma) ** 0.25 * np.exp(-math.pi * gamma * tr * tr) * th3
    out = np.asarray(out) * np.exp(2j * math.pi * m * nu)
    return complex(out) if out.ndim == 0 else out


def zak_sech_series(gamma, t, nu, n_max=None):
    """``(pi gamma/2)^(1/2) sum_n e^{2 pi i n nu} / cosh(pi gamma (t - n))``.

    Summed symmetrically around ``round(t)``.
    """
    w = WindowSpec(WindowKind.SECH, gamma)
    if n_max is None:
        n_max = default_truncation(w)
    _check_truncation(w, n_max)
    t, nu = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(nu, dtype=float))
    shape = t.shape + (1,)
    n = np.round(t).reshape(shape) + np.arange(-n_max, n_max + 1)
    x = math.pi * gamma * (t.reshape(shape) - n)
    # 1/cosh written with exp(-|x|) to stay finite
    e = np.exp(-np.abs(x))
    terms = 2.0 * e / (1.0 + e * e) * np.exp(2j * math.pi * n * nu.reshape(shape))
    out = math.sqrt(math.pi * gamma / 2.0) * terms.sum(axis=-1)
    return complex(out) if out.ndim == 0 else out


def zak_sech_closed(gamma, t, nu):
    """Theta-quotient form of the secant's Zak transform::

        2^{-1/2} pi^{1/2} gamma theta1'(0; q) e^{-pi gamma t^2} theta3(pi(nu - i gamma t); q)
        / [theta4(pi nu; q) theta4(pi t; q')],   q = e^{-pi gamma}, q' = e^{-pi/gamma}
    """
    t, nu = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(nu, dtype=float))
    tr, m = _unit_cell(t)
    q = ThetaNome.from_gamma(gamma)
    qd = ThetaNome.from_gamma(1.0 / gamma)
    pref = 2.0**-0.5 * math.sqrt(math.pi) * gamma * theta1_prime0(q)
    num = np.exp(-math.pi * gamma * tr * tr) * theta_eval(ThetaKind.THETA3, math.pi * (nu - 1j * gamma * tr), q)
    den = theta_eval(ThetaKind.THETA4, math.pi * nu, q).real * theta_eval(ThetaKind.THETA4, math.pi * tr, qd).real
    out = pref * np.asarray(num) / den * np.exp(2j * math.pi * m * nu)
    return complex(out) if out.ndim == 0 else out


def zak_closed(w, t, nu):
    if w.kind == WindowKind.GAUSSIAN:
        return zak_gaussian_closed(w.gamma, t, nu)
    return zak_sech_closed(w.gamma, t, nu)


def half_offset(n):
    """Offset ``1/(2n)``: keeps a grid of size ``n`` off ``t = 1/2`` when n is even."""
    return 0.5 / n


@dataclass
class ZakField:
    """Zak samples at ``(j/n_t + t_offset, k/n_nu + nu_offset)``; rows are t."""

    n_t: int
    n_nu: int
    t_offset: float
    nu_offset: float
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_t < 2 or self.n_nu < 2:
            raise ValueError("grid resolutions must be at least 2")
        self.values = np.asarray(self.values, dtype=complex).reshape(self.n_t, self.n_nu)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("ZakField values must be finite")

    @property
    def t(self):
        return np.arange(self.n_t) / self.n_t + self.t_offset

    @property
    def nu(self):
        return np.arange(self.n_nu) / self.n_nu + self.nu_offset

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "nu", "re", "im"])
        for i, tv in enumerate(self.t):
            for j, nv in enumerate(self.nu):
                z = self.values[i, j]
                writer.writerow([_fmt(tv), _fmt(nv), _fmt(z.real), _fmt(z.imag)])
        return buf.getvalue()

    def to_dict(self):
        return {
            "n_t": self.n_t,
            "n_nu": self.n_nu,
            "t_offset": self.t_offset,
            "nu_offset": self.nu_offset,
            "meta": self.meta,
            "re": self.values.real.ravel().tolist(),
            "im": self.values.imag.ravel().tolist(),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d):
        values = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
        return cls(d["n_t"], d["n_nu"], d["t_offset"], d["nu_offset"], values, dict(d.get("meta", {})))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _fmt(x):
    return format(float(x), ".17g")


def zak_grid(w, n_t, n_nu, t_offset=0.0, nu_offset=0.0, method="closed", l_max=None):
    """Fill a :class:`ZakField` with the direct series or the closed form."""
    if n_t < 2 or n_nu < 2:
        raise ValueError("grid resolutions must be at least 2")
    t = np.arange(n_t) / n_t + t_offset
    nu = np.arange(n_nu) / n_nu + nu_offset
    T, V = np.meshgrid(t, nu, indexing="ij")
    meta = {"window": w.kind.value, "gamma": w.gamma, "method": method}
    if method == "direct":
        l_max = default_truncation(w) if l_max is None else l_max
        values = zak_direct(w, T, V, l_max)
        meta["l_max"] = l_max
    elif method == "closed":
        values = zak_closed(w, T, V)
        meta["theta_rel_eps"] = ThetaNome.from_gamma(w.gamma).rel_eps
    else:
        raise ValueError(f"unknown method {method!r}; expected 'direct' or 'closed'")
    return ZakField(n_t, n_nu, float(t_offset), float(nu_offset), values, meta)
