"""The Lanczos gamma kit and branch-safe complex helpers."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcrevival import special
from jcrevival.ddmath import CDD, DD


def test_log_gamma_at_one_and_half():
    assert abs(special.log_gamma(1.0)) < 2e-10
    assert abs(special.log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 2e-10


def test_log_gamma_modulus_identity_at_1_plus_i():
    # |Gamma(1+i)| = sqrt(pi / sinh(pi))
    val = np.exp(special.log_gamma(1 + 1j))
    want = math.sqrt(math.pi / math.sinh(math.pi))
    assert abs(abs(val) - want) < 1e-10 * want


def test_modulus_identity_across_y():
    # |1/Gamma(1+iy)|^2 * pi y / sinh(pi y) = 1, limited by the inherent
    # Lanczos series error of ~2e-10
    y = np.linspace(1e-3, 50.0, 2000)
    r = special.reciprocal_gamma(1.0 + 1j * y)
    with np.errstate(over="ignore"):
        scaled = np.abs(r) ** 2 * np.pi * y / np.sinh(np.pi * y)
    mask = np.isfinite(scaled)  # sinh overflows past y ~ 225, far off grid
    assert mask.all()
    assert np.abs(scaled - 1.0).max() < 1e-9


def test_reciprocal_gamma_trivial_points():
    assert special.reciprocal_gamma(1.0 + 0j) == pytest.approx(1.0, abs=2e-10)
    poles = special.reciprocal_gamma(np.array([0.0 + 0j, -1.0 + 0j, -2.0 + 0j]))
    assert np.all(poles == 0.0)
    got = special.reciprocal_gamma(1.0 + 1j)
    assert abs(abs(got) - math.sqrt(math.sinh(math.pi) / math.pi)) < 1e-9


def test_reciprocal_gamma_reflection_negative_half():
    # Gamma(-1/2) = -2 sqrt(pi)
    got = special.reciprocal_gamma(-0.5 + 0j)
    assert got == pytest.approx(-1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-9)


def test_log_gamma_rejects_left_half_plane():
    with pytest.raises(ValueError):
        special.log_gamma(-1.0 + 2j)
    with pytest.raises(ValueError):
        special.log_gamma(0.0 + 1j)


@given(st.floats(min_value=0.5, max_value=10.0),
       st.floats(min_value=-10.0, max_value=10.0))
@settings(max_examples=80)
def test_log_gamma_recurrence(re, im):
    z = complex(re, im)
    resid = special.log_gamma(z + 1.0) - special.log_gamma(z) - np.log(z)
    assert abs(resid) < 1e-9


def test_conjugate_symmetry(rng):
    zs = rng.uniform(0.2, 8.0, 60) + 1j * rng.uniform(-8.0, 8.0, 60)
    a = special.reciprocal_gamma(np.conj(zs))
    b = np.conj(special.reciprocal_gamma(zs))
    assert np.max(np.abs(a - b) / np.abs(b)) < 3e-16


def test_principal_sqrt_branch():
    assert special.principal_sqrt(4.0) == pytest.approx(2.0)
    assert special.principal_sqrt(1j) == pytest.approx((1 + 1j) / math.sqrt(2))
    assert special.principal_sqrt(-1.0) == pytest.approx(1j)  # not -1j


def test_principal_sqrt_roundtrip(rng):
    z = rng.uniform(-50, 50, 10000) + 1j * rng.uniform(-50, 50, 10000)
    r = special.principal_sqrt(z)
    assert np.all(r.real >= 0.0)
    assert np.max(np.abs(r * r - z) / np.abs(z)) < 4 * np.finfo(float).eps


def test_complex_trig_values():
    assert special.complex_cos(0.0 + 0j) == pytest.approx(1.0)
    assert special.complex_sin(0.0 + 0j) == pytest.approx(0.0)
    assert special.complex_cos(1j * np.pi) == pytest.approx(math.cosh(math.pi))
    got = special.complex_sin(np.pi / 2 + 1j)
    assert got == pytest.approx(math.cosh(1.0))


def test_complex_trig_overflow_signal():
    with pytest.raises(OverflowError):
        special.complex_cos(1.0 + 701j)
    with pytest.raises(OverflowError):
        special.complex_sin(CDD(DD(0.0), DD(705.0)))
    # 700 itself is inside the contract
    special.complex_cos(1.0 + 699.9j)


def test_extended_matches_standard_to_15_digits():
    for z in (1 + 1j, 2.5 - 3j, 0.3 + 0.1j, 7.0 + 0j):
        std = special.log_gamma(z)
        ext = special.log_gamma(special.to_extended(z)).to_complex()
        assert abs(std - ext) <= 5e-15 * max(abs(std), 1.0)
        std_r = special.reciprocal_gamma(np.array([z]))[0]
        ext_r = special.reciprocal_gamma(special.to_extended(z)).to_complex()
        assert abs(std_r - ext_r) <= 5e-14 * abs(std_r)


def test_extended_reflection_and_poles():
    got = special.reciprocal_gamma(CDD(DD(-0.5), DD(0.0))).to_complex()
    assert got.real == pytest.approx(-1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-9)
    pole = special.reciprocal_gamma(CDD(DD(-3.0), DD(0.0))).to_complex()
    assert pole == 0.0


def test_lanczos_coefficients_are_the_published_set():
    assert special.LANCZOS_G == 5.0
    assert special.LANCZOS_COEFFS[0] == 1.000000000190015
    assert special.LANCZOS_COEFFS[1] == 76.18009172947146
    assert special.LANCZOS_COEFFS[6] == -0.5395239384953e-5
    assert len(special.LANCZOS_COEFFS) == 7


def test_euler_gamma_value():
    assert special.EULER_GAMMA == pytest.approx(0.577215664901532860, abs=1e-15)
