"""Sum-to-integral engines against closed-form and direct-summation oracles."""

import math

import numpy as np
import pytest

import jcrevival.ddmath as dd
from jcrevival.abel_plana import (factorial_weighted_transform,
                                  finite_transform, semi_infinite_transform)
from jcrevival.errors import PrecisionLossError
from jcrevival.quadrature import QuadratureSpec

SPEC = QuadratureSpec("simpson", upper_limit=100.0, step=1e-3)


def test_constant_phi_has_no_correction():
    r = finite_transform(lambda z: np.ones_like(z), 0, 4, SPEC)
    assert r.total == pytest.approx(4.0, abs=1e-12)
    assert abs(r.correction_integral) < 1e-12


def test_linear_phi_correction_cancels():
    r = finite_transform(lambda z: z, 0, 2, SPEC)
    assert r.total == pytest.approx(2.0, abs=1e-10)
    assert r.line_integral == pytest.approx(2.0, abs=1e-12)
    assert abs(r.correction_integral) < 1e-10


def test_finite_exponential_vs_geometric_sum():
    want = 0.5 + sum(math.exp(-n) for n in range(1, 10)) + 0.5 * math.exp(-10.0)
    r = finite_transform(lambda z: np.exp(-z), 0, 10, SPEC)
    assert abs(r.total - want) < 1e-8
    assert r.total == r.boundary_terms + r.line_integral + r.correction_integral


def test_finite_transform_telescopes():
    # half-weighted endpoints make the three-interval split exact:
    # the two half-weights at the seam add up to the interior weight
    phi = lambda z: np.exp(-0.3 * z)
    spec = QuadratureSpec("simpson", upper_limit=60.0, step=1e-3)
    whole = finite_transform(phi, 0, 6, spec).total
    left = finite_transform(phi, 0, 3, spec).total
    right = finite_transform(phi, 3, 6, spec).total
    assert abs(whole - (left + right)) < 1e-10


def test_degenerate_strip_rejected():
    with pytest.raises(ValueError):
        finite_transform(lambda z: z, 3, 3, SPEC)
    with pytest.raises(ValueError):
        finite_transform(lambda z: z, 5, 2, SPEC)


def test_semi_infinite_exponential():
    want = 0.5 + 1.0 / (math.e - 1.0)   # 1.0819767...
    r = semi_infinite_transform(lambda z: np.exp(-z), SPEC)
    assert abs(r.total - want) < 1e-8
    assert want == pytest.approx(1.0819767, abs=5e-8)


def test_semi_infinite_direct_summation_oracle():
    lam = 0.7
    phi = lambda z: np.exp(-lam * z) * np.cos(0.3 * z)
    direct = 0.5 + sum(math.exp(-lam * n) * math.cos(0.3 * n)
                       for n in range(1, 200))
    r = semi_infinite_transform(phi, SPEC)
    assert abs(r.total - direct) < 1e-8


def test_real_phi_gives_real_total():
    r = semi_infinite_transform(lambda z: np.exp(-z), SPEC)
    assert abs(np.imag(r.total)) < 1e-10


def test_unbounded_phi_signals_instead_of_noise():
    # e^{-z^2} grows like e^{y^2} on the imaginary axis and violates the
    # transform's boundedness hypothesis; the engine detects the overflow
    with pytest.raises(PrecisionLossError):
        semi_infinite_transform(lambda z: np.exp(-z * z), SPEC)


def test_factorial_weighted_constant_gives_e():
    r = factorial_weighted_transform(lambda z: np.ones_like(z), 0.0, SPEC)
    assert abs(r.total - math.e) < 1e-6
    assert r.boundary_terms == pytest.approx(0.5)


def test_factorial_weighted_linearity_in_f():
    k = 3.7
    r = factorial_weighted_transform(lambda z: k * np.ones_like(z), 0.0, SPEC)
    assert abs(r.total - k * math.e) < 1e-6 * k


def test_factorial_weighted_exponential_sum():
    # f(x) = |a|^{2x} at a = 1: the sum is e again
    r = factorial_weighted_transform(lambda z: np.exp(0.0 * z), 0.0, SPEC)
    assert abs(r.total - math.e) < 1e-6
    # at a = 4: sum of 16^n/n! = e^16
    r = factorial_weighted_transform(lambda z: np.exp(z * math.log(16.0)), 0.0, SPEC)
    assert abs(r.total - math.exp(16.0)) < 1e-4 * math.exp(16.0)


def test_factorial_weighted_identity_combination():
    # the engine's pieces reproduce -1/4 + e^{a^2}/2 for the pure weight
    for alpha in (1.0, 4.0):
        r = factorial_weighted_transform(
            lambda z, a=alpha: np.exp(2.0 * math.log(a) * z), 0.0, SPEC)
        lhs = 0.5 * r.line_integral + 0.5 * r.correction_integral
        want = -0.25 + 0.5 * math.exp(alpha * alpha)
        assert abs(lhs - want) < 1e-6 * abs(want)


def test_factorial_weighted_shifted_argument():
    # sum of f(n+c)/n! with f = exp(-x), c = 0.5: closed form e^{-c} e^{1/e}
    c = 0.5
    want = math.exp(-c) * math.exp(math.exp(-1.0))
    r = factorial_weighted_transform(lambda z: np.exp(-z), c, SPEC)
    assert abs(r.total - want) < 1e-8


def test_negative_c_rejected():
    with pytest.raises(ValueError):
        factorial_weighted_transform(lambda z: np.ones_like(z), -0.5, SPEC)


def test_caller_supplied_origin_matches_extrapolated():
    phi = lambda z: np.exp(-z)
    auto = semi_infinite_transform(phi, SPEC)
    # d/dy of i[phi(iy)-phi(-iy)]/(e^{2piy}-1) at 0 is -phi'(0)/pi = 1/pi
    manual = semi_infinite_transform(phi, SPEC, origin_value=1.0 / math.pi)
    assert abs(auto.total - manual.total) < 1e-9


def test_extended_kind_semi_infinite():
    spec = QuadratureSpec("simpson", upper_limit=60.0, step=2e-3,
                          precision_kind="extended")
    r = semi_infinite_transform(lambda z: dd.cexp(-z), spec)
    want = 0.5 + 1.0 / (math.e - 1.0)
    assert abs(r.total - want) < 1e-9
