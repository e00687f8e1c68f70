"""Gabor frames generated by the hyperbolic secant.

Theta functions, Zak transforms, the secant/Gaussian Zak factorization,
Ron-Shen frame bounds and the critical-density dual and tight windows.
"""

from .critical import (
    dual_gauss_series,
    dual_numeric,
    dual_sech_closed,
    limit_profiles,
    tight_equality_check,
    tight_window,
)
from .errors import GaborError
from .factorization import FactorizationReport, constant_E, rank1_factor_test, verify_theorem1
from .framebounds import FrameBoundsReport, analytic_lower_bound, frame_bounds_estimate, m_delta
from .theta import ThetaKind, ThetaNome, theta1_prime0, theta_eval
from .windows import LatticeParams, WindowKind, WindowSpec, dilate, eval_window, gaussian, reduce_lattice, sech
from .zak import ZakField, zak_closed, zak_direct, zak_grid

__version__ = "0.1.0"

__all__ = [
    "FactorizationReport",
    "FrameBoundsReport",
    "GaborError",
    "LatticeParams",
    "ThetaKind",
    "ThetaNome",
    "WindowKind",
    "WindowSpec",
    "ZakField",
    "analytic_lower_bound",
    "constant_E",
    "dilate",
    "dual_gauss_series",
    "dual_numeric",
    "dual_sech_closed",
    "eval_window",
    "frame_bounds_estimate",
    "gaussian",
    "limit_profiles",
    "m_delta",
    "rank1_factor_test",
    "reduce_lattice",
    "sech",
    "theta1_prime0",
    "theta_eval",
    "tight_equality_check",
    "tight_window",
    "verify_theorem1",
    "zak_closed",
    "zak_direct",
    "zak_grid",
]
