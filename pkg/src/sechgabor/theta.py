r"""Jacobi theta functions with real nome.

Conventions follow Whittaker & Watson, ch. 21:

.. math::

    \vartheta_3(z;q) = \sum_n q^{n^2} e^{2inz}, \qquad
    \vartheta_4(z;q) = \sum_n (-1)^n q^{n^2} e^{2inz},

and :math:`\vartheta_1, \vartheta_2` with half-integer indices.  All four are
evaluated by truncated symmetric series.  The nome is carried together with
``lam = -log q`` so that nomes of the form ``exp(-pi*gamma)`` keep full
relative precision in the exponent.

For ``q > e^{-pi}`` the direct series cancels badly near the minima of
theta_4 (theta_4(0; 0.9) is about 7e-10 while its terms are O(1)), so the
default path applies the imaginary transformation ``tau -> -1/tau`` first
and sums the dual series at ``q~ <= e^{-pi}``.  ``method="series"`` forces
the direct sum.

Admissible strip
----------------
For ``z = x + iy`` the largest series term has magnitude about
``exp(y**2 / lam)``.  Arguments with ``y**2 / lam`` above ``0.9 * log(DBL_MAX)``
are rejected with :class:`ArgumentOutOfStrip`; inside the strip every term
is computed as ``exp(-lam*n**2 -+ 2*n*y)`` so no intermediate overflows.
The truncation order grows by ``ceil(|y| / lam)`` to keep the tail below
``rel_eps`` times the peak term.
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ArgumentOutOfStrip, NomeOutOfRange, UnsupportedKind

REL_EPS = 1e-16
STRIP_LIMIT = 0.9 * math.log(np.finfo(float).max)


class ThetaKind(enum.IntEnum):
    THETA1 = 1
    THETA2 = 2
    THETA3 = 3
    THETA4 = 4


@dataclass(frozen=True)
class ThetaNome:
    """A nome ``q`` in (0, 1) with its series truncation order.

    Use :meth:`from_gamma` for ``q = exp(-pi*gamma)``; it stores the exact
    exponent instead of recovering it from ``log(q)``.
    """

    q: float
    rel_eps: float = REL_EPS
    lam: float = float("nan")

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0) or not math.isfinite(q):
            raise NomeOutOfRange(f"nome q={self.q!r} is not in (0, 1)")
        if not (0.0 < self.rel_eps < 1.0):
            raise ValueError(f"rel_eps={self.rel_eps!r} is not in (0, 1)")
        object.__setattr__(self, "q", q)
        if math.isnan(self.lam):
            object.__setattr__(self, "lam", -math.log(q))
        elif not self.lam > 0:
            raise NomeOutOfRange(f"log-nome {self.lam!r} is not positive")

    @classmethod
    def from_gamma(cls, gamma, rel_eps=REL_EPS):
        """Nome ``exp(-pi*gamma)``."""
        gamma = float(gamma)
        if not gamma > 0 or not math.isfinite(gamma):
            raise NomeOutOfRange(f"gamma={gamma!r} must be positive and finite")
        lam = math.pi * gamma
        q = math.exp(-lam)
        if q <= 0.0 or q >= 1.0:
            raise NomeOutOfRange(f"gamma={gamma!r} gives nome {q!r} outside (0, 1)")
        return cls(q, rel_eps, lam)

    @property
    def n_max(self):
        """Smallest safe order: ``ceil(sqrt(ln(rel_eps)/ln(q))) + 2``."""
        return math.ceil(math.sqrt(-math.log(self.rel_eps) / self.lam)) + 2


def _as_nome(nome):
    if isinstance(nome, ThetaNome):
        return nome
    return ThetaNome(nome)


def _order(nome_lam, rel_eps, y_abs, n_max):
    if n_max is not None:
        return int(n_max)
    return math.ceil(math.sqrt(-math.log(rel_eps) / nome_lam)) + 2 + math.ceil(y_abs / nome_lam)


def _check_strip(y_abs, lam, q):
    if y_abs**2 / lam > STRIP_LIMIT:
        raise ArgumentOutOfStrip(
            f"|Im z|={y_abs:.6g} outside admissible strip "
            f"|Im z| <= {math.sqrt(STRIP_LIMIT * lam):.6g} for q={q:.6g}"
        )


def _series(kind, z, lam, N):
    x, y = z.real, z.imag
    acc = np.zeros(z.shape, dtype=complex)
    # largest |n| first; n and -n (or n and -n-1) paired
    if kind in (ThetaKind.THETA3, ThetaKind.THETA4):
        for n in range(N, 0, -1):
            sign = -1.0 if (kind == ThetaKind.THETA4 and n % 2) else 1.0
            base = -lam * n * n
            plus = np.exp(base - 2 * n * y) * np.exp(2j * n * x)
            minus = np.exp(base + 2 * n * y) * np.exp(-2j * n * x)
            acc += sign * (plus + minus)
        acc += 1.0
    else:
        for n in range(N, -1, -1):
            k = 2 * n + 1
            base = -lam * (n + 0.5) ** 2
            plus = np.exp(base - k * y) * np.exp(1j * k * x)
            minus = np.exp(base + k * y) * np.exp(-1j * k * x)
            if kind == ThetaKind.THETA2:
                acc += plus + minus
            else:
                sign = -1.0 if n % 2 else 1.0
                acc += sign * (plus - minus) / 1j
    return acc


# imaginary transformation tau -> -1/tau maps theta_k to theta_{_DUAL[k]}
_DUAL = {ThetaKind.THETA1: ThetaKind.THETA1, ThetaKind.THETA2: ThetaKind.THETA4,
         ThetaKind.THETA3: ThetaKind.THETA3, ThetaKind.THETA4: ThetaKind.THETA2}


def _modular(kind, z, nome):
    """Evaluate through ``q = e^{-pi s}`` -> ``q~ = e^{-pi/s}``.

    theta_k(z; q) = c_k s^{-1/2} exp(-z^2/(pi s)) theta_k~(-i z/s; q~),
    with c_1 = i and c_k = 1 otherwise.  The real part of ``z`` is first
    folded into [-pi/2, pi/2) using (anti)periodicity under z -> z + pi.
    """
    m = np.floor(z.real / math.pi + 0.5)
    zr = z - m * math.pi
    if kind in (ThetaKind.THETA1, ThetaKind.THETA2):
        sign = np.where(m % 2 == 0, 1.0, -1.0)
    else:
        sign = 1.0
    s = nome.lam / math.pi
    lam_d = math.pi / s
    expo = -zr * zr / (math.pi * s)
    if zr.size and float(np.max(expo.real)) > STRIP_LIMIT:
        raise ArgumentOutOfStrip("modular prefactor overflows; argument too far from the real axis")
    w = -1j * zr / s
    y_abs = float(np.max(np.abs(w.imag))) if w.size else 0.0
    _check_strip(y_abs, lam_d, math.exp(-lam_d))
    inner = _series(_DUAL[kind], w, lam_d, _order(lam_d, nome.rel_eps, y_abs, None))
    out = sign * s**-0.5 * np.exp(expo) * inner
    return 1j * out if kind == ThetaKind.THETA1 else out


def theta_eval(kind, z, nome, n_max=None, method="auto"):
    """Evaluate ``theta_kind(z; q)``.

    Parameters
    ----------
    kind : ThetaKind or int in 1..4
    z : complex scalar or array
    nome : ThetaNome or float
    n_max : int, optional
        Override the derived truncation order (series method only).
    method : {"auto", "series", "modular"}
        ``auto`` sums the series directly when ``q <= e^{-pi}`` and goes
        through the imaginary transformation otherwise, where the direct
        series loses digits to cancellation.

    Returns
    -------
    complex or ndarray of complex, shaped like ``z``.
    """
    kind = ThetaKind(kind)
    nome = _as_nome(nome)
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    if method == "auto":
        method = "series" if (nome.lam >= math.pi or n_max is not None) else "modular"
    if method == "modular":
        out = _modular(kind, z, nome)
    elif method == "series":
        y_abs = float(np.max(np.abs(z.imag))) if z.size else 0.0
        _check_strip(y_abs, nome.lam, nome.q)
        out = _series(kind, z, nome.lam, _order(nome.lam, nome.rel_eps, y_abs, n_max))
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(out) if scalar else out


def theta1_prime0(nome, n_max=None, method="auto"):
    """Derivative of theta_1 at z = 0.

    Termwise differentiation, ``2 * sum_{n>=0} (-1)^n (2n+1) q^((n+1/2)^2)``.
    For ``q > e^{-pi}`` (``method="auto"``) the sum is taken at the dual nome
    and rescaled by ``s^{-3/2}``, ``q = e^{-pi s}``.  Strictly positive.
    """
    nome = _as_nome(nome)
    if method == "auto":
        method = "series" if (nome.lam >= math.pi or n_max is not None) else "modular"
    lam, scale = nome.lam, 1.0
    if method == "modular":
        s = nome.lam / math.pi
        lam, scale = math.pi / s, s**-1.5
    elif method != "series":
        raise ValueError(f"unknown method {method!r}")
    N = _order(lam, nome.rel_eps, 0.0, n_max)
    acc = 0.0
    for n in range(N, -1, -1):
        term = (2 * n + 1) * math.exp(-lam * (n + 0.5) ** 2)
        acc += -term if n % 2 else term
    return 2.0 * scale * acc


class ModularCheck(NamedTuple):
    lhs: complex
    rhs: complex
    diff: complex


def theta3_modular(t, gamma):
    """Evaluate both sides of the imaginary transformation of theta_3.

    With ``s = 1/2 - t``::

        theta3(pi*i*s*gamma; e^{-pi*gamma})
            == gamma^{-1/2} exp(pi*gamma*s^2) theta3(pi*s; e^{-pi/gamma})

    ``t`` may be complex.  Each side is computed independently through
    :func:`theta_eval`; the return value carries both and their difference.
    """
    gamma = float(gamma)
    if not gamma > 0:
        raise NomeOutOfRange(f"gamma={gamma!r} must be positive")
    s = 0.5 - complex(t)
    # direct series on both sides; the modular path would make this circular
    lhs = theta_eval(ThetaKind.THETA3, math.pi * 1j * s * gamma, ThetaNome.from_gamma(gamma), method="series")
    rhs = (
        gamma**-0.5
        * np.exp(math.pi * gamma * s * s)
        * theta_eval(ThetaKind.THETA3, math.pi * s, ThetaNome.from_gamma(1.0 / gamma), method="series")
    )
    rhs = complex(rhs)
    return ModularCheck(lhs, rhs, lhs - rhs)


def theta_quasi_period_shift(kind, z, nome):
    """``theta(z + pi*i*gamma)`` via the quasi-period table, ``q = e^{-pi*gamma}``.

    theta3(w + pi i gamma) =  e^{pi gamma} e^{-2iw} theta3(w)
    theta4(w + pi i gamma) = -e^{pi gamma} e^{-2iw} theta4(w)
    """
    kind = ThetaKind(kind)
    if kind not in (ThetaKind.THETA3, ThetaKind.THETA4):
        raise UnsupportedKind(f"quasi-period shift is only provided for theta3/theta4, got {kind.name}")
    nome = _as_nome(nome)
    z = np.asarray(z, dtype=complex)
    factor = np.exp(nome.lam - 2j * z)
    if kind == ThetaKind.THETA4:
        factor = -factor
    out = factor * theta_eval(kind, z, nome)
    return complex(out) if out.ndim == 0 else out
