"""Quantitative check that Zg2 / Zg1 splits into a t-part times a nu-part.

For the secant ``g2`` and Gaussian ``g1`` with the same ``gamma``::

    Zg2(t, nu) * theta4(pi nu; e^{-pi gamma}) * theta4(pi t; e^{-pi/gamma}) == E * Zg1(t, nu)

with ``E = pi^(1/2) (gamma/2)^(3/4) theta1'(0; e^{-pi gamma})``.  The check is
done in product form so the common zero at (1/2, 1/2) needs no special case.
"""

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ZakZeroError
from .theta import ThetaKind, ThetaNome, theta1_prime0, theta_eval
from .zak import zak_direct, zak_gaussian_closed, zak_sech_series

RANK1_TOL = 1e-10
ZERO_GUARD = 1e-13


def constant_E(gamma):
    """``pi^(1/2) (gamma/2)^(3/4) theta1'(0; e^{-pi gamma})``."""
    gamma = float(gamma)
    return math.sqrt(math.pi) * (gamma / 2.0) ** 0.75 * theta1_prime0(ThetaNome.from_gamma(gamma))


@dataclass
class FactorizationReport:
    gamma: float
    E_claimed: float
    max_abs_residual: float
    max_rel_residual: float
    residual_at_center: float
    rank1_defect: float
    grid_meta: dict = field(default_factory=dict)

    def passed(self, tol):
        return self.max_rel_residual < tol

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _grid(n_t, n_nu, t_offset, nu_offset):
    t = np.arange(n_t) / n_t + t_offset
    nu = np.arange(n_nu) / n_nu + nu_offset
    return np.meshgrid(t, nu, indexing="ij")


def verify_theorem1(gamma, n_t=64, n_nu=64, t_offset=0.0, nu_offset=0.0):
    """Residual of the product-form identity on a unit-cell grid.

    The secant side uses its direct series; the Gaussian side uses the
    theta closed form, so the two routes share no code beyond theta_eval.
    """
    if n_t < 8 or n_nu < 8:
        raise ValueError("verify_theorem1 needs resolutions of at least 8")
    gamma = float(gamma)
    T, V = _grid(n_t, n_nu, t_offset, nu_offset)
    zg2 = zak_sech_series(gamma, T, V)
    th_nu = theta_eval(ThetaKind.THETA4, math.pi * V, ThetaNome.from_gamma(gamma)).real
    th_t = theta_eval(ThetaKind.THETA4, math.pi * T, ThetaNome.from_gamma(1.0 / gamma)).real
    E = constant_E(gamma)
    rhs = E * zak_gaussian_closed(gamma, T, V)
    R = np.abs(zg2 * th_nu * th_t - rhs)
    max_abs = float(R.max())
    max_rel = max_abs / float(np.abs(rhs).max())

    # direct evaluation at the common zero, independent of the grid
    zc = zak_sech_series(gamma, 0.5, 0.5)
    rc = zc * theta_eval(4, math.pi / 2, ThetaNome.from_gamma(gamma)).real
    rc = rc * theta_eval(4, math.pi / 2, ThetaNome.from_gamma(1.0 / gamma)).real
    rc = abs(rc - E * zak_gaussian_closed(gamma, 0.5, 0.5))

    half = (t_offset + 0.5 / n_t, nu_offset + 0.5 / n_nu)
    Th, Vh = _grid(n_t, n_nu, *half)
    ratio = zak_sech_series(gamma, Th, Vh) / _guarded(zak_gaussian_closed(gamma, Th, Vh))
    defect = rank1_factor_test(np.log(ratio))
    return FactorizationReport(
        gamma=gamma,
        E_claimed=E,
        max_abs_residual=max_abs,
        max_rel_residual=max_rel,
        residual_at_center=float(rc),
        rank1_defect=defect,
        grid_meta={
            "n_t": n_t,
            "n_nu": n_nu,
            "t_offset": t_offset,
            "nu_offset": nu_offset,
            "rank1_t_offset": half[0],
            "rank1_nu_offset": half[1],
        },
    )


def _guarded(z):
    mag = np.abs(z)
    if np.any(mag < ZERO_GUARD * mag.max()):
        raise ZakZeroError("denominator Zak transform vanishes on the grid; use a half-cell offset")
    return z


def zak_log_ratio(w_num, w_den, n_t, n_nu, t_offset=None, nu_offset=None):
    """Complex ``log(Z w_num / Z w_den)`` on a grid (direct series, half-offset by default)."""
    t_offset = 0.5 / n_t if t_offset is None else t_offset
    nu_offset = 0.5 / n_nu if nu_offset is None else nu_offset
    T, V = _grid(n_t, n_nu, t_offset, nu_offset)
    den = _guarded(zak_direct(w_den, T, V))
    return np.log(zak_direct(w_num, T, V) / den)


def rank1_factor_test(log_ratio):
    """Largest mixed second difference of a log-ratio grid.

    ``u(t) + v(nu)`` has identically zero mixed differences, so a defect at
    rounding level means the ratio factorizes on the grid.  Log-modulus and
    phase are differenced separately and the larger defect is returned.
    """
    L = np.asarray(log_ratio, dtype=complex)
    if L.ndim != 2 or min(L.shape) < 2:
        raise ValueError("log_ratio must be a 2-D grid with both sides >= 2")
    defect = 0.0
    for part in (L.real, L.imag):
        mixed = part[1:, 1:] - part[1:, :-1] - part[:-1, 1:] + part[:-1, :-1]
        defect = max(defect, float(np.abs(mixed).max()))
    return defect


def ratio_is_factorizable(w_num, w_den, n_t=32, n_nu=32, tol=RANK1_TOL):
    """Convenience wrapper: ``(defect, defect < tol)``."""
    defect = rank1_factor_test(zak_log_ratio(w_num, w_den, n_t, n_nu))
    return defect, defect < tol
