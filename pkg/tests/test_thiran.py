import math
from fractions import Fraction
from math import comb

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hilbertpair.errors import InvalidOrder, ZeroArgument
from hilbertpair.spectral import alpha
from hilbertpair.thiran import (
    thiran_closed_eval,
    thiran_coeffs,
    thiran_exact,
    thiran_product_coeffs,
    thiran_ratio_phase,
)

orders = st.integers(1, 12)


def test_small_orders():
    assert thiran_coeffs(1).coeffs == pytest.approx((1.0, 1 / 3), rel=1e-15)
    assert thiran_coeffs(2).coeffs == pytest.approx((1.0, 2.0, 1 / 5), rel=1e-15)


@pytest.mark.parametrize("L", range(1, 33))
def test_last_coefficient_and_binomial_ratios(L):
    exact = thiran_exact(L)
    assert exact[0] == 1 and exact[-1] == Fraction(1, 2 * L + 1)
    d = thiran_coeffs(L).coeffs
    assert abs(d[-1] - 1 / (2 * L + 1)) <= 1e-15
    for n in range(L + 1):
        assert d[L - n] / d[L] == pytest.approx(comb(2 * L + 1, 2 * n), rel=1e-12)


@pytest.mark.parametrize("L", range(1, 13))
def test_product_formula_matches_binomials(L):
    assert thiran_product_coeffs(L) == pytest.approx(thiran_coeffs(L).coeffs, rel=1e-12)


def test_invalid_orders():
    with pytest.raises(InvalidOrder):
        thiran_coeffs(0)
    with pytest.raises(InvalidOrder):
        thiran_coeffs(65)
    with pytest.raises(ZeroArgument):
        thiran_closed_eval(2, 0.0)


def test_closed_form_examples():
    assert thiran_closed_eval(1, 1.0) == pytest.approx(4 / 3)
    assert abs(thiran_closed_eval(2, -1.0)) == pytest.approx(4 / 5)
    for L in range(1, 10):
        assert thiran_closed_eval(L, 1.0) == pytest.approx(4**L / (2 * L + 1), rel=1e-14)


@pytest.mark.parametrize("L", range(1, 13))
def test_closed_form_matches_coefficients(L):
    z = np.exp(2j * np.pi * (np.arange(256) + 0.5) / 256)
    err = np.abs(thiran_closed_eval(L, z) - thiran_coeffs(L)(z))
    assert np.max(err) <= 1e-11 * 4**L / (2 * L + 1)


@given(orders, st.floats(0.1, 10), st.floats(-math.pi, math.pi))
def test_closed_form_branch_independent(L, rho, theta):
    z = rho * np.exp(1j * theta)
    w = np.sqrt(z)
    n = 2 * L + 1
    other = z ** (-L) * ((1 - w) ** n + (1 + w) ** n) / (2 * n)  # -w branch
    assert thiran_closed_eval(L, z) == pytest.approx(other, rel=1e-12)
    assert thiran_closed_eval(L, z) == pytest.approx(thiran_coeffs(L)(z), rel=1e-9)


@pytest.mark.parametrize("L", range(1, 11))
def test_circle_extrema(L):
    z = np.exp(2j * np.pi * np.arange(4096) / 4096)
    mag = np.abs(thiran_coeffs(L)(z))
    assert mag.min() == pytest.approx(2**L / (2 * L + 1), abs=1e-10)
    assert mag.max() == pytest.approx(4**L / (2 * L + 1), abs=1e-10)
    assert np.argmin(mag) == 2048 and np.argmax(mag) == 0


def test_ratio_phase_examples():
    assert thiran_ratio_phase(3, 0.0) == pytest.approx(1.0)
    assert thiran_ratio_phase(1, math.pi) == pytest.approx(-1.0)


@given(orders, st.floats(-50, 50))
def test_ratio_phase_unimodular(L, w):
    assert abs(thiran_ratio_phase(L, w)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("L", [1, 2, 3, 5, 8])
def test_ratio_phase_matches_alpha(L):
    w = 2 * np.pi * np.arange(4096) / 4096 - np.pi
    lhs = thiran_ratio_phase(L, w)
    rhs = np.exp(-0.5j * w + 1j * alpha(L, w))
    assert np.max(np.abs(lhs - rhs)) <= 1e-11


def _ratio_defect_hp(L, w):
    """``|ratio(w) - e^{-iw/2}|`` in 60-digit arithmetic; the float version
    underflows for L >= 4 on this window."""
    with mpmath.workdps(60):
        d = [mpmath.mpf(c.numerator) / c.denominator for c in thiran_exact(L)]
        z = mpmath.expj(w)
        D = lambda x: mpmath.fsum(c * x ** (-k) for k, c in enumerate(d))
        ratio = mpmath.expj(-w * L) * D(mpmath.conj(z)) / D(z)
        return float(abs(ratio - mpmath.expj(-w / 2)))


@pytest.mark.parametrize("L", range(1, 7))
def test_half_sample_delay_flatness(L):
    w = np.geomspace(1e-3, 1e-1, 40)
    defect = np.array([_ratio_defect_hp(L, mpmath.mpf(x)) for x in w])
    slope = np.polyfit(np.log(w), np.log(defect), 1)[0]
    assert abs(slope - (2 * L + 1)) <= 0.15


@pytest.mark.parametrize("L", [1, 2, 3])
def test_half_sample_delay_flatness_float(L):
    w = np.geomspace(1e-3, 1e-1, 60)
    defect = np.abs(thiran_ratio_phase(L, w) - np.exp(-0.5j * w))
    keep = defect > 1e-13
    slope = np.polyfit(np.log(w[keep]), np.log(defect[keep]), 1)[0]
    assert abs(slope - (2 * L + 1)) <= 0.15
