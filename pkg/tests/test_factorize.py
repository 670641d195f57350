import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import cached_bank
from hilbertpair import bezout
from hilbertpair.errors import NotNonnegative
from hilbertpair.factorize import (
    PhaseChoice,
    assemble_bank,
    check_nonnegative,
    hilbert_order_check,
    lift_to_circle,
    pr_defect,
    riesz_factor,
    select_roots,
    unit_circle,
    vanishing_moment_order,
    verify_pr,
)
from hilbertpair.polycore import LaurentFilter, RealPoly, poly_roots
from hilbertpair.thiran import thiran_coeffs

GRID = [(L, M) for L in range(1, 9) for M in range(1, 9)]
SQRT2 = math.sqrt(2.0)


def test_lift_examples():
    one = lift_to_circle(RealPoly([1.0]))
    assert (one.lo, one.coeffs) == (0, (1.0,))
    y = lift_to_circle(RealPoly([0.0, 1.0]))
    assert (y.lo, y.coeffs) == (-1, (0.25, 0.5, 0.25))
    assert lift_to_circle(RealPoly([0.9])).coeffs == (0.9,)


@given(st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=6), st.floats(0, math.pi))
def test_lift_is_symmetric_and_matches_cosine(c, theta):
    r = RealPoly(c)
    R = lift_to_circle(r)
    if not R.is_zero():
        assert R.lo == -R.hi
        assert R.coeffs == pytest.approx(R.coeffs[::-1], abs=1e-12)
    z = np.exp(2j * theta)
    assert R(z) == pytest.approx(r(math.cos(theta) ** 2), abs=1e-10)


def test_riesz_examples():
    Q = riesz_factor(RealPoly([0.9]))
    assert Q.coeffs == pytest.approx((math.sqrt(0.9),))
    Q = riesz_factor(RealPoly([0.0, 1.0]))
    assert (Q.lo, Q.coeffs) == (0, pytest.approx((0.5, 0.5)))


@given(st.floats(-3, 3).filter(lambda y: abs(y) > 1e-3 and abs(y - 1) > 1e-3))
def test_root_maps_to_reciprocal_pair(y0):
    z = select_roots(RealPoly([-y0, 1.0]), PhaseChoice.ALL_INSIDE_UNIT_CIRCLE)[0]
    for w in (z, 1 / z):
        assert abs(w * w - (4 * y0 - 2) * w + 1) <= 1e-9 * (1 + abs(w)) ** 2
    assert abs(z) <= 1 + 1e-12


def test_negative_r_is_rejected():
    with pytest.raises(NotNonnegative) as info:
        riesz_factor(RealPoly([0.5, -2.0]))
    assert info.value.value < 0 and 0 <= info.value.y_min <= 1


@pytest.mark.parametrize("L,M", GRID)
def test_round_trip_and_pr(L, M):
    bank = cached_bank(L, M)
    # riesz_factor checks |Q|^2 = R internally; verify the bank end to end
    assert verify_pr(bank) <= 1e-8
    assert bank.h0(1.0) == pytest.approx(SQRT2, abs=1e-10)
    assert bank.g0(1.0) == pytest.approx(SQRT2, abs=1e-10)
    assert len(bank.h0) == len(bank.g0) == M + L + bank.q_poly.degree + 1


@pytest.mark.parametrize("L,M", [(1, 1), (2, 3), (4, 4), (7, 7), (8, 8)])
def test_phases_share_magnitude(L, M):
    mid, mn = cached_bank(L, M, "mid"), cached_bank(L, M, "min")
    z = unit_circle(4096)
    assert np.max(np.abs(np.abs(mid.h0(z)) - np.abs(mn.h0(z)))) <= 1e-9
    assert verify_pr(mn) <= 1e-8
    if mid.q_poly.degree >= 2:
        assert not np.allclose(mid.h0.coeffs, mn.h0.coeffs)


@pytest.mark.parametrize("L,M", [(2, 2), (4, 4), (6, 3)])
def test_mid_phase_roots_inside(L, M):
    q = cached_bank(L, M).q_poly
    # Q(z) = sum q_k z^-k has z-roots at the roots of sum q_k w^(deg-k)
    z = poly_roots(RealPoly(q.coeffs[::-1])).as_array()
    assert np.all(np.abs(z) < 1)


@pytest.mark.parametrize("L,M", [(2, 2), (3, 5), (5, 5)])
def test_R_roots_reciprocal_closed(L, M):
    sol = bezout.solve(L, M)
    R = lift_to_circle(sol.r_reflected, reflected=True)
    z = poly_roots(RealPoly(R.coeffs)).as_array()
    inv = 1 / z
    for w in inv:
        assert np.min(np.abs(z - w)) <= 1e-8 * (1 + abs(w))


@pytest.mark.parametrize("L,M", [(2, 3), (5, 2)])
def test_magnitudes_of_h0_g0_agree(L, M):
    bank = cached_bank(L, M)
    z = unit_circle(1024)
    assert np.abs(bank.h0(z)) == pytest.approx(np.abs(bank.g0(z)), abs=1e-12)


def test_g0_structure():
    bank = cached_bank(3, 2)
    D = thiran_coeffs(3).filter
    F = LaurentFilter(0, bank.q_poly.coeffs) * LaurentFilter(0, (1.0, 2.0, 1.0))
    assert bank.h0.coeffs == pytest.approx((F * D).coeffs, abs=1e-14)
    assert bank.g0.coeffs == pytest.approx((F * D.reverse().delay(3)).coeffs, abs=1e-14)


def test_pr_examples():
    haar = LaurentFilter(0, (SQRT2 / 2, SQRT2 / 2))
    assert pr_defect(haar) <= 1e-15
    bank = cached_bank(3, 3)
    c = list(bank.h0.coeffs)
    c[0] += 1e-3
    assert pr_defect(LaurentFilter(bank.h0.lo, c)) >= 1e-4


@pytest.mark.parametrize("M", range(1, 9))
def test_vanishing_moments(M):
    assert vanishing_moment_order(cached_bank(2, M)) == pytest.approx(M, abs=0.1)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_hilbert_slope(L):
    assert hilbert_order_check(cached_bank(L, 2)) == pytest.approx(2 * L + 1, abs=0.2)


def test_hilbert_slope_underflow_reports_inf():
    assert hilbert_order_check(cached_bank(8, 2)) == math.inf


def test_hilbert_slope_scale_invariant():
    bank = cached_bank(2, 3)
    doubled = assemble_bank(2, 3, LaurentFilter(0, bank.q_poly.coeffs))
    scaled = type(bank)(**{**bank.__dict__, "h0": bank.h0 * 2.0, "g0": bank.g0 * 2.0})
    assert hilbert_order_check(scaled) == pytest.approx(hilbert_order_check(doubled), abs=0.05)
