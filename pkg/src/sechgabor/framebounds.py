"""Gabor frame bounds from the Ron-Shen time-domain criterion.

After reduction to ``b = 1`` the system ``(g, a, 1)`` has bounds

    A = ess inf_t  lambda_min(M(t) M(t)^T),   B = ess sup_t  lambda_max(...)

with ``M(t)[l, n] = g(t - n a - l)``.  Rows are truncated to ``|l| <= L_row``;
columns are kept wherever the window is above ``COLUMN_TOL`` of its peak.
The truncated Gram matrix is a compression of the infinite one, so its
smallest eigenvalue approaches the true value from above, and its largest
from below, at a rate of roughly ``1/L_row**2``.

For ``a = p/q`` in lowest terms the spectrum is ``1/q``-periodic in ``t`` and,
for even windows, symmetric under ``t -> -t``.  The t-grid is the half-offset
grid on ``[-1/(2q), 1/(2q))``; only its non-negative half is evaluated.

Estimates are one-sided: a minimum over finitely many ``t`` can only
overestimate the essential infimum.
"""

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import LinAlgError, eigvals_banded, eigvalsh

from .errors import LatticeError, NotReduced, NumericalFailure, TruncationTooSmall
from .factorization import constant_E
from .theta import ThetaNome, theta_eval
from .windows import LatticeParams, WindowKind, WindowSpec, eval_window, reduce_lattice, support_radius

DEFAULT_L_ROW = 512
DEFAULT_T_GRID = 64
CONVERGENCE_TOL = 1e-6
SINGULAR_TOL = 1e-14
COLUMN_TOL = 1e-17
EDGE_TOL = 1e-12


def worker_count():
    """Thread cap from ``GSL_THREADS`` (default 1)."""
    raw = os.environ.get("GSL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GSL_THREADS={raw!r} is not an integer") from None
    return max(n, 1)


def _require_reduced(lat):
    if lat.b != 1:
        raise NotReduced(f"lattice {lat} must be reduced to b = 1 first")


@dataclass
class RonShenMatrix:
    t: float
    a: Fraction
    L_row: int
    N_col: int
    entries: np.ndarray

    @property
    def rows(self):
        return np.arange(-self.L_row, self.L_row + 1)

    @property
    def cols(self):
        return np.arange(-self.N_col, self.N_col + 1)


def default_columns(w, a, L_row):
    """Columns needed so every kept row sees its full window support."""
    return math.ceil((L_row + support_radius(w, COLUMN_TOL)) / float(a)) + 1


def build_ronshen(w, lat, t, L_row=20, N_col=None, check_edges=True):
    """Dense truncated ``M(t)``, entries ``g(t - n a - l)``.

    With ``check_edges`` the outermost columns must be negligible
    (below ``EDGE_TOL`` of the largest column norm); otherwise the matrix
    is returned as truncated.
    """
    _require_reduced(lat)
    if L_row < 4:
        raise TruncationTooSmall(f"L_row={L_row} must be at least 4")
    if N_col is None:
        N_col = default_columns(w, lat.a, L_row)
    if N_col < 4:
        raise TruncationTooSmall(f"N_col={N_col} must be at least 4")
    l = np.arange(-L_row, L_row + 1)[:, None]
    n = np.arange(-N_col, N_col + 1)[None, :]
    M = eval_window(w, t - n * float(lat.a) - l)
    col_norm = np.linalg.norm(M, axis=0)
    edge = max(col_norm[0], col_norm[-1])
    if check_edges and edge >= EDGE_TOL * col_norm.max():
        raise TruncationTooSmall(
            f"edge column norm {edge:.3g} is not below {EDGE_TOL:g} x peak column norm; increase N_col"
        )
    return RonShenMatrix(float(t), lat.a, L_row, N_col, M)


def singular_extremes(M):
    """``(lambda_min, lambda_max)`` of ``M M^T``, i.e. squared extreme singular values.

    Dense SVD; if there are more rows than columns the minimum is 0.
    """
    A = M.entries if isinstance(M, RonShenMatrix) else np.asarray(M, dtype=float)
    try:
        s = np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD failed: {exc}") from exc
    smax = float(s[0]) ** 2
    smin = 0.0 if A.shape[0] > A.shape[1] else float(s[-1]) ** 2
    return smin, smax


def gram_band(w, lat, t, L_row):
    """Lower band storage of the row Gram matrix ``M(t) M(t)^T``.

    Entry ``(l, l+d)`` is ``h(t - l, d) = sum_n g(t - l - n a) g(t - l - n a - d)``
    summed over every ``n`` where the window is above ``COLUMN_TOL``; it depends
    on ``l`` only through ``l mod p`` for ``a = p/q``, so ``p`` rows are
    computed and tiled.
    """
    _require_reduced(lat)
    a = float(lat.a)
    p = lat.a.numerator
    R = support_radius(w, COLUMN_TOL)
    bw = min(math.ceil(2.0 * R) + 1, 2 * L_row)
    K = math.ceil((R + bw) / a) + 2
    r = np.arange(p)
    x = t - r
    n0 = np.round(x / a)
    s = x[:, None] - (n0[:, None] + np.arange(-K, K + 1)[None, :]) * a
    G = eval_window(w, s)
    h = np.stack([(G * eval_window(w, s - d)).sum(axis=1) for d in range(bw + 1)])
    # drop negligible outer diagonals
    keep = np.abs(h).max(axis=1) > COLUMN_TOL * h[0].max()
    bw = int(np.nonzero(keep)[0].max())
    h = h[: bw + 1]
    n_rows = 2 * L_row + 1
    idx = np.mod(np.arange(-L_row, L_row + 1), p)
    band = h[:, idx].copy()
    for d in range(1, bw + 1):
        band[d, n_rows - d:] = 0.0
    n_cols = math.ceil((L_row + R) / a) + 1
    return band, n_cols


def _band_extremes(band):
    try:
        ev = eigvals_banded(band, lower=True, check_finite=True)
    except (LinAlgError, ValueError):
        ev = None
    if ev is None or not np.all(np.isfinite(ev)):
        n = band.shape[1]
        full = np.zeros((n, n))
        for d in range(band.shape[0]):
            full += np.diag(band[d, : n - d], -d)
            if d:
                full += np.diag(band[d, : n - d], d)
        try:
            ev = eigvalsh(full)
        except LinAlgError as exc:
            raise NumericalFailure(f"eigenvalue computation failed: {exc}") from exc
    return float(ev[0]), float(ev[-1])


def _t_grid(lat, n):
    """Half-offset grid of ``n`` points on one period, and its non-negative half."""
    period = 1.0 / lat.a.denominator
    t = (np.arange(n) + 0.5) / n * period - 0.5 * period
    return t, t[t >= 0]


def _extremes_over_t(w, lat, ts, L_row, workers):
    fn = lambda tv: _band_extremes(gram_band(w, lat, tv, L_row)[0])
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            res = list(ex.map(fn, ts))
    else:
        res = [fn(tv) for tv in ts]
    lo = np.array([r[0] for r in res])
    hi = np.array([r[1] for r in res])
    return lo, hi


@dataclass
class FrameBoundsReport:
    window: str
    gamma: float
    a: str
    b: str
    reduced_gamma: float
    reduced_a: str
    A_est: float
    B_est: float
    t_grid_size: int
    L_row: int
    N_col: int
    converged: bool
    singular: bool
    argmin_t: float
    A_refined: float = None
    B_refined: float = None
    A_analytic: float = None
    note: str = ""

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def table_row(self):
        return {k: getattr(self, k) for k in ("gamma", "a", "b", "A_est", "B_est", "A_analytic", "converged")}


def frame_bounds_estimate(w, lat, t_grid=DEFAULT_T_GRID, L_row=DEFAULT_L_ROW, check_convergence=True,
                          conv_tol=CONVERGENCE_TOL, workers=None):
    """Estimate ``A, B`` for ``(w, a, b)`` with ``ab <= 1``.

    The lattice is reduced to ``b = 1`` first.  With ``check_convergence`` the
    whole estimate is repeated at ``2 * L_row`` (columns follow); ``converged``
    records whether both bounds moved by less than ``conv_tol`` relative.
    The reported ``A_est, B_est`` are those at ``L_row``.
    """
    if lat.density > 1:
        raise LatticeError(f"ab = {lat.density} > 1: no Gabor frame exists")
    if t_grid < 2:
        raise ValueError("t_grid must be at least 2")
    workers = worker_count() if workers is None else max(int(workers), 1)
    wr, lr = reduce_lattice(w, lat)
    t_all, t_half = _t_grid(lr, t_grid)
    lo, hi = _extremes_over_t(wr, lr, t_half, L_row, workers)
    i = int(np.argmin(lo))
    A, B = float(lo[i]), float(hi.max())
    singular = A < SINGULAR_TOL
    if singular:
        A = 0.0
    _, n_cols = gram_band(wr, lr, float(t_half[0]), L_row)

    converged = False
    A2 = B2 = None
    if check_convergence:
        lo2, hi2 = _extremes_over_t(wr, lr, t_half, 2 * L_row, workers)
        A2, B2 = float(lo2.min()), float(hi2.max())
        dA = abs(A2 - float(lo[i])) / max(abs(A2), np.finfo(float).tiny)
        dB = abs(B2 - B) / B
        converged = bool(not singular and dA < conv_tol and dB < conv_tol)

    note = ""
    if lat.is_critical:
        note = "critical density ab = 1: not a frame for this window; A_est reflects grid resolution only"
    return FrameBoundsReport(
        window=w.kind.value,
        gamma=w.gamma,
        a=str(lat.a),
        b=str(lat.b),
        reduced_gamma=wr.gamma,
        reduced_a=str(lr.a),
        A_est=A,
        B_est=B,
        t_grid_size=int(t_grid),
        L_row=int(L_row),
        N_col=int(n_cols),
        converged=converged,
        singular=bool(singular),
        argmin_t=float(t_half[i]),
        A_refined=A2,
        B_refined=B2,
        note=note,
    )


def m_delta(delta):
    """``min_z 1/theta4(z; e^{-pi delta})^2 = 1/theta3(0; e^{-pi delta})^2``.

    theta4 on the real line peaks at ``z = pi/2`` where it equals theta3(0).
    """
    th3 = theta_eval(3, 0.0, ThetaNome.from_gamma(delta)).real
    return 1.0 / (th3 * th3)


def analytic_lower_bound(gamma, lat, A1=None, **estimate_kw):
    """Lower bound ``m_g m_{1/g} E(g)^2 A_1`` for the secant system.

    ``gamma`` is the secant's parameter for the original lattice; after
    reduction to ``b = 1`` it becomes ``g = gamma / b``, and ``A_1`` is the
    lower frame bound of ``(gaussian(g), a b, 1)``.  ``A1`` may be supplied to
    skip that estimate.
    """
    if lat.density >= 1:
        raise LatticeError(f"analytic lower bound needs ab < 1, got ab = {lat.density}")
    ws, lr = reduce_lattice(WindowSpec(WindowKind.SECH, gamma), lat)
    g = ws.gamma
    if A1 is None:
        A1 = frame_bounds_estimate(WindowSpec(WindowKind.GAUSSIAN, g), lr, **estimate_kw).A_est
    E = constant_E(g)
    return m_delta(g) * m_delta(1.0 / g) * E * E * A1


def secant_report(gamma, lat, **estimate_kw):
    """Frame bounds of ``(sech(gamma), a, b)`` with the analytic bound attached when ``ab < 1``."""
    rep = frame_bounds_estimate(WindowSpec(WindowKind.SECH, gamma), lat, **estimate_kw)
    if lat.density < 1:
        rep.A_analytic = analytic_lower_bound(gamma, lat, **estimate_kw)
    return rep
