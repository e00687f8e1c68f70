"""The two analytic windows, the dilation operator and rational lattices.

Both windows are normalized to unit L2 norm::

    gaussian(gamma):  (2 gamma)^(1/4) exp(-pi gamma t^2)
    sech(gamma):      (pi gamma / 2)^(1/2) / cosh(pi gamma t)
"""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import LatticeError, NonpositiveDilation

# beyond this |pi*gamma*t| the secant is below the smallest subnormal scale
_SECH_CUTOFF = 350.0


class WindowKind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    SECH = "sech"


@dataclass(frozen=True)
class WindowSpec:
    kind: WindowKind
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "kind", WindowKind(self.kind))
        gamma = float(self.gamma)
        if not gamma > 0 or not math.isfinite(gamma):
            raise ValueError(f"gamma={self.gamma!r} must be positive and finite")
        object.__setattr__(self, "gamma", gamma)

    def __call__(self, t):
        return eval_window(self, t)

    @property
    def peak(self):
        """Value at t = 0 (the maximum)."""
        if self.kind == WindowKind.GAUSSIAN:
            return (2.0 * self.gamma) ** 0.25
        return math.sqrt(math.pi * self.gamma / 2.0)

    def __str__(self):
        return f"{self.kind.value}(gamma={self.gamma:g})"


def gaussian(gamma):
    return WindowSpec(WindowKind.GAUSSIAN, gamma)


def sech(gamma):
    return WindowSpec(WindowKind.SECH, gamma)


def eval_window(w, t):
    """Evaluate window ``w`` at ``t`` (scalar or array)."""
    t = np.asarray(t, dtype=float)
    if w.kind == WindowKind.GAUSSIAN:
        with np.errstate(over="ignore"):
            out = w.peak * np.exp(-math.pi * w.gamma * t * t)
    else:
        x = np.abs(math.pi * w.gamma * t)
        e = np.exp(-np.minimum(x, _SECH_CUTOFF))
        out = np.where(x > _SECH_CUTOFF, 0.0, w.peak * 2.0 * e / (1.0 + e * e))
    return float(out) if out.ndim == 0 else out


def dilate(w, c):
    """Window ``D_c w``, where ``(D_c f)(t) = c^(1/2) f(c t)``.

    Both families are closed under dilation: sech(gamma) -> sech(gamma c),
    gaussian(gamma) -> gaussian(gamma c^2).
    """
    c = float(c)
    if not c > 0 or not math.isfinite(c):
        raise NonpositiveDilation(f"dilation factor c={c!r} must be positive")
    if w.kind == WindowKind.GAUSSIAN:
        return WindowSpec(w.kind, w.gamma * c * c)
    return WindowSpec(w.kind, w.gamma * c)


def support_radius(w, rel_tol):
    """Radius beyond which ``|w(t)| < rel_tol * w(0)``."""
    if not 0 < rel_tol < 1:
        raise ValueError("rel_tol must lie in (0, 1)")
    if w.kind == WindowKind.GAUSSIAN:
        return math.sqrt(-math.log(rel_tol) / (math.pi * w.gamma))
    # sech(x) <= 2 exp(-x)
    return math.log(2.0 / rel_tol) / (math.pi * w.gamma)


def decay_envelope(w, t):
    """Exponential envelope ``C exp(-pi gamma |t|)`` dominating ``|w(t)|``.

    Valid for both families; for the Gaussian it is loose but still a bound
    once ``|t| >= 1``.
    """
    t = np.abs(np.asarray(t, dtype=float))
    return 2.0 * w.peak * np.exp(-math.pi * w.gamma * t)


def _to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("lattice constants must be exact rationals, not floats")
    return Fraction(value)


@dataclass(frozen=True)
class LatticeParams:
    """Time step ``a`` and frequency step ``b`` as exact rationals."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = _to_fraction(self.a), _to_fraction(self.b)
        if a <= 0:
            raise LatticeError(f"a={a} must be positive")
        if b <= 0:
            raise LatticeError(f"b={b} must be positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def parse(cls, a, b="1"):
        """Build from strings such as ``"2/3"``."""
        return cls(Fraction(str(a)), Fraction(str(b)))

    @property
    def density(self):
        """The product ``a*b`` (exact)."""
        return self.a * self.b

    @property
    def is_critical(self):
        return self.density == 1

    def __str__(self):
        return f"a={self.a}, b={self.b}"


def reduce_lattice(w, lat):
    """Map ``(w, a, b)`` to the equivalent system with ``b = 1``.

    ``(g, a, b)`` is a frame iff ``(D_c g, a/c, b c)`` is, with the same
    bounds; taking ``c = 1/b`` gives ``(D_{1/b} g, a b, 1)``.
    """
    if lat.b == 1:
        return w, lat
    return dilate(w, 1.0 / lat.b), LatticeParams(lat.a * lat.b, Fraction(1))
