import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tunnelkit import quadrature as q
from tunnelkit.errors import NonConvergence

mpmath.mp.dps = 40


def test_rule_weights():
    assert q.GK_KRONROD.sum() == pytest.approx(2.0, abs=1e-15)
    assert q.GK_GAUSS.sum() == pytest.approx(2.0, abs=1e-15)
    assert np.count_nonzero(q.GK_GAUSS) == 7


@pytest.mark.parametrize("deg", range(0, 23))
def test_kronrod_exact_for_polynomials(deg):
    # K15 integrates degree <= 22 exactly
    val = np.dot(q.GK_KRONROD, q.GK_NODES**deg)
    assert val == pytest.approx((1 + (-1) ** deg) / (deg + 1), abs=1e-14)


@pytest.mark.parametrize("f, a, b, exact", [
    (np.sin, 0, math.pi, 2.0),
    (np.exp, -1, 2, math.e**2 - math.exp(-1)),
    (lambda x: 1 / (1 + x * x), -50, 50, 2 * math.atan(50)),
    (lambda x: np.sqrt(x), 0, 1, 2 / 3),
    (lambda x: np.exp(-40 * x) / (1 + x), 0, 20.8, None),
])
def test_integrate_known(f, a, b, exact):
    res = q.integrate(f, a, b, rel_tol=1e-12)
    if exact is None:
        exact = float(mpmath.quad(lambda t: mpmath.exp(-40 * t) / (1 + t), [0, 0.1, 1, 20.8]))
    assert res.value == pytest.approx(exact, rel=1e-11)
    assert res.evaluations % 15 == 0


def test_integrate_scalar_only_callable():
    res = q.integrate(lambda x: math.cos(x), 0, 1)
    assert res.value == pytest.approx(math.sin(1), rel=1e-12)


def test_integrate_interval_order():
    with pytest.raises(ValueError):
        q.integrate(np.exp, 1, 0)
    assert q.integrate(np.exp, 1, 1).value == 0.0


def test_nonconvergence_carries_estimate():
    with pytest.raises(NonConvergence) as info:
        q.integrate(lambda x: np.sin(1 / x), 1e-6, 1, rel_tol=1e-13, max_evals=150)
    assert info.value.evaluations <= 150 + 30
    assert math.isfinite(info.value.estimate)


def test_tolerance_floor():
    with pytest.raises(ValueError):
        q.integrate(np.exp, 0, 1, rel_tol=1e-16)


@given(st.floats(-7, 7))
@settings(max_examples=300)
def test_erf_vs_mpmath(x):
    assert q.erf(x) == pytest.approx(float(mpmath.erf(x)), abs=2e-15)


@given(st.floats(0, 26))
@settings(max_examples=300)
def test_erfc_relative_vs_mpmath(x):
    ref = float(mpmath.erfc(x))
    assert q.erfc(x) == pytest.approx(ref, rel=1e-13)


@given(st.floats(-5, 5))
def test_erf_matches_math(x):
    assert q.erf(x) == pytest.approx(math.erf(x), abs=2e-15)


def test_erf_odd_and_vectorized():
    x = np.linspace(-4, 4, 33)
    y = q.erf(x)
    assert isinstance(y, np.ndarray) and y.shape == x.shape
    assert np.allclose(y, -q.erf(-x), atol=0)
    assert q.erf(1.0) == pytest.approx(0.842700792949715, abs=1e-15)


@pytest.mark.parametrize("x", [0.5, 1.0, 3.0, 10.0, 100.0, 1e4])
def test_erfcx(x):
    assert q.erfcx(x) == pytest.approx(float(mpmath.exp(x * x) * mpmath.erfc(x)), rel=1e-13)


@pytest.mark.parametrize("order", [0, 1, 2, 3])
def test_erfc_asymptotic_error_shrinks_with_x(order):
    xs = np.array([4.0, 6.0, 8.0])
    rel = [abs(q.erfc_asymptotic(x, order) / float(mpmath.erfc(x)) - 1) for x in xs]
    assert rel[0] > rel[1] > rel[2]


@pytest.mark.parametrize("a, b, lo, hi", [
    (0.97, 0.0076, 0, 20.8),
    (2.0, 0.5, 0, 3),
    (-3.0, 0.2, 0, 10),
    (10.0, 1e-6, 0, 20.8),
    (0.97, 1e-7, 0, 20.8),
])
def test_gaussian_exp_integrals(a, b, lo, hi):
    ref0 = mpmath.quad(lambda x: mpmath.exp(-a * x - b * x * x), [lo, hi])
    ref1 = mpmath.quad(lambda x: x * mpmath.exp(-a * x - b * x * x), [lo, hi])
    assert q.gaussian_exp_integral(a, b, lo, hi) == pytest.approx(float(ref0), rel=1e-12)
    assert q.x_gaussian_exp_integral(a, b, lo, hi) == pytest.approx(float(ref1), rel=1e-10)


def test_gaussian_requires_positive_b():
    with pytest.raises(ValueError):
        q.gaussian_exp_integral(1.0, 0.0, 0, 1)
