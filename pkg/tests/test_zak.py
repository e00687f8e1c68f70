import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sechgabor.errors import TruncationTooSmall
from sechgabor.windows import WindowKind, WindowSpec, gaussian, sech
from sechgabor.zak import (
    ZakField,
    default_truncation,
    half_offset,
    tail_bound,
    zak_closed,
    zak_direct,
    zak_gaussian_closed,
    zak_grid,
    zak_sech_closed,
    zak_sech_series,
)

GAMMAS = [0.25, 0.5, 1.0, 2.0, 4.0]
KINDS = [WindowKind.GAUSSIAN, WindowKind.SECH]


def _grid(n=64, off=0.0):
    t = np.arange(n) / n + off
    return np.meshgrid(t, t, indexing="ij")


def test_gaussian_origin_value():
    # mpmath partial sum, |l| <= 6
    ref = float(mpmath.fsum(mpmath.exp(-mpmath.pi * l * l) for l in range(-6, 7))) * 2**0.25
    assert ref == pytest.approx(1.2919960, abs=1e-7)
    assert zak_direct(gaussian(1), 0.0, 0.0).real == pytest.approx(ref, rel=1e-14)
    assert zak_gaussian_closed(1.0, 0.0, 0.0).real == pytest.approx(ref, rel=1e-14)


def test_sech_origin_value():
    ref = math.sqrt(math.pi / 2) * float(mpmath.nsum(lambda l: 1 / mpmath.cosh(mpmath.pi * l), [-mpmath.inf, mpmath.inf]))
    assert zak_sech_series(1.0, 0.0, 0.0).real == pytest.approx(ref, rel=1e-14)
    v = zak_sech_closed(1.0, 0.0, 0.0)
    assert v.real > 0 and abs(v.imag) < 1e-15
    assert v.real == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("gamma", GAMMAS)
def test_zero_at_half_half(kind, gamma):
    w = WindowSpec(kind, gamma)
    assert abs(zak_direct(w, 0.5, 0.5)) < 1e-12
    assert abs(zak_closed(w, 0.5, 0.5)) < 1e-12


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("gamma", GAMMAS)
def test_direct_vs_closed(kind, gamma):
    w = WindowSpec(kind, gamma)
    T, V = _grid()
    d = zak_direct(w, T, V)
    c = zak_closed(w, T, V)
    assert np.max(np.abs(d - c)) <= 1e-12 * np.max(np.abs(d))


def test_gaussian_closed_off_grid_point():
    a = zak_gaussian_closed(2.0, 0.3, 0.7)
    b = zak_direct(gaussian(2), 0.3, 0.7)
    assert abs(a - b) <= 1e-12 * abs(b)


@pytest.mark.parametrize("gamma", GAMMAS)
def test_sech_series_is_direct_series(gamma):
    T, V = _grid()
    a = zak_sech_series(gamma, T, V)
    b = zak_direct(sech(gamma), T, V)
    assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(b))


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("gamma", GAMMAS)
def test_quasi_periodicity(kind, gamma):
    w = WindowSpec(kind, gamma)
    T, V = _grid(32)
    base = zak_direct(w, T, V)
    scale = np.max(np.abs(base))
    assert np.max(np.abs(zak_direct(w, T + 1, V) - np.exp(2j * np.pi * V) * base)) <= 1e-13 * scale
    assert np.max(np.abs(zak_direct(w, T, V + 1) - base)) <= 1e-13 * scale
    assert np.max(np.abs(zak_closed(w, T + 1, V) - np.exp(2j * np.pi * V) * zak_closed(w, T, V))) <= 1e-13 * scale
    assert np.max(np.abs(zak_closed(w, T - 3, V) - np.exp(-6j * np.pi * V) * zak_closed(w, T, V))) <= 1e-13 * scale


def test_field_wraparound_in_nu():
    f = zak_grid(gaussian(1), 16, 16)
    g = zak_grid(gaussian(1), 16, 16, nu_offset=1.0)
    assert np.max(np.abs(f.values - g.values)) <= 1e-14 * np.max(np.abs(f.values))


def test_grid_smoke_and_methods():
    f = zak_grid(gaussian(1), 16, 16, method="closed")
    assert f.values.shape == (16, 16) and np.all(np.isfinite(f.values))
    d = zak_grid(gaussian(1), 16, 16, method="direct")
    assert np.max(np.abs(f.values - d.values)) <= 1e-12 * np.max(np.abs(d.values))
    assert d.meta["l_max"] == default_truncation(gaussian(1))
    with pytest.raises(ValueError):
        zak_grid(gaussian(1), 16, 16, method="fft")
    with pytest.raises(ValueError):
        zak_grid(gaussian(1), 1, 16)


def test_half_offset_avoids_half():
    n = 8
    f = zak_grid(sech(1), n, n, half_offset(n), half_offset(n))
    assert not np.any(np.isclose(f.t, 0.5))
    assert np.min(np.abs(f.values)) > 0


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("gamma", GAMMAS)
def test_default_truncation_meets_tail(kind, gamma):
    w = WindowSpec(kind, gamma)
    L = default_truncation(w)
    assert L >= math.ceil(20 / (gamma * math.pi)) + 10
    assert tail_bound(w, L) <= 1e-15
    assert tail_bound(w, L - 5) >= tail_bound(w, L)


def test_explicit_truncation_too_small():
    with pytest.raises(TruncationTooSmall):
        zak_direct(sech(0.25), 0.1, 0.2, l_max=1)


def test_doubling_truncation_stable():
    w = sech(0.5)
    T, V = _grid(16)
    L = default_truncation(w)
    a = zak_direct(w, T, V, L)
    b = zak_direct(w, T, V, 2 * L)
    assert np.max(np.abs(a - b)) <= 1e-14 * np.max(np.abs(b))


@given(st.floats(-4, 4), st.floats(-2, 2), st.sampled_from(GAMMAS), st.sampled_from(KINDS))
@settings(max_examples=80, deadline=None)
def test_closed_matches_direct_anywhere(t, nu, gamma, kind):
    w = WindowSpec(kind, gamma)
    d = zak_direct(w, t, nu)
    c = zak_closed(w, t, nu)
    assert abs(d - c) <= 1e-12 * max(w.peak, 1.0) * 3


def test_field_round_trip():
    f = zak_grid(sech(1), 8, 4, 0.125, 0.0)
    text = f.to_json()
    g = ZakField.from_json(text)
    assert g.to_json() == text
    assert np.array_equal(g.values, f.values)
    lines = f.to_csv().splitlines()
    assert lines[0] == "t,nu,re,im"
    assert len(lines) == 1 + 32
    # 17 significant digits round-trip binary64
    t, nu, re, im = (float(x) for x in lines[5].split(","))
    assert complex(re, im) == f.values.ravel()[4]
