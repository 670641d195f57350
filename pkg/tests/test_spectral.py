import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import cached_bank
from hilbertpair.errors import TruncationTooShallow
from hilbertpair.factorize import FilterBank, PhaseChoice
from hilbertpair.polycore import LaurentFilter, RealPoly
from hilbertpair.spectral import (
    SpectrumGrid,
    alpha,
    analyze,
    beta,
    bound_violations,
    cascade_spectra,
    distance_to_4pi_lattice,
    eta,
    leakage_measures,
    parseval_mass,
    sobolev_exponent,
    step_distance,
    transition_matrix,
    u_L,
    u_L_bound,
    verify_phase_relations,
)

PI = math.pi
orders = st.integers(1, 16)
freqs = st.floats(-60, 60, allow_nan=False)

TABLE1 = {  # (M, L) -> published value
    (1, 1): 0.60, (1, 2): 0.72, (1, 3): 0.81, (1, 4): 0.89, (1, 5): 0.94, (1, 6): 0.98,
    (2, 1): 1.11, (2, 2): 1.23, (2, 3): 1.34, (2, 4): 1.44, (2, 5): 1.54, (2, 6): 1.63,
    (3, 1): 1.52, (3, 2): 1.64, (3, 3): 1.74, (3, 4): 1.83, (3, 5): 1.92, (3, 6): 2.01,
    (4, 1): 1.87, (4, 2): 1.98, (4, 3): 2.07, (4, 4): 2.16, (4, 5): 2.24, (4, 6): 2.32,
    (5, 1): 2.19, (5, 2): 2.29, (5, 3): 2.37, (5, 4): 2.45, (5, 5): 2.53, (5, 6): 2.60,
    (6, 1): 2.48, (6, 2): 2.57, (6, 3): 2.65, (6, 4): 2.72, (6, 5): 2.80, (6, 6): 2.87,
    (8, 1): 3.00, (3, 8): 2.17, (1, 8): 1.00,
}


# -- phase functions ---------------------------------------------------------


def test_alpha_examples():
    assert alpha(3, 0.0) == 0.0
    assert alpha(1, PI) == pytest.approx(-PI / 2)
    for L in (1, 2, 5):
        assert abs(alpha(L, 2 * PI)) == pytest.approx(PI)


@given(orders, freqs)
def test_alpha_odd_bounded_periodic(L, w):
    a = alpha(L, w)
    assert -PI <= a <= PI
    assert alpha(L, -w) == -a
    assert abs(np.exp(1j * alpha(L, w + 4 * PI)) - np.exp(1j * a)) <= 1e-12


@pytest.mark.parametrize("L", [1, 2, 3, 6])
def test_alpha_jumps_by_two_pi(L):
    h = 1e-9
    for center in (2 * PI, -2 * PI, 6 * PI):
        jump = alpha(L, center - h) - alpha(L, center + h)
        assert abs(abs(jump) - 2 * PI) <= 1e-6


def test_beta_examples():
    v, tail = beta(2, 0.0)
    assert v == 0.0 and tail == 0.0
    v40, tail = beta(1, PI, 40)
    v60, _ = beta(1, PI, 60)
    assert tail < 1e-12 and abs(v40 - v60) <= 1e-12


@given(orders, freqs)
def test_beta_odd(L, w):
    assert beta(L, -w)[0] == -beta(L, w)[0]


def test_eta_limits_at_zero():
    for L in (1, 2, 3, 8):
        eps = 1e-9
        assert abs(1 - np.exp(1j * eta(L, eps)) - 2) == pytest.approx(math.sqrt(2), abs=1e-6)
        assert abs(1 - np.exp(1j * eta(L, -eps))) == pytest.approx(math.sqrt(2), abs=1e-6)
        assert step_distance(L, 0.0) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_u_L_examples():
    assert u_L(16, -PI) <= 1e-3
    assert u_L_bound(16, -PI) == pytest.approx(2 * math.sqrt(2) * 3 * 0.75**33, rel=1e-12)
    assert u_L_bound(3, -4 * PI) > 2
    assert u_L(3, -4 * PI) <= 2
    assert u_L(2, 0.0) == pytest.approx(math.sqrt(2))


def test_u_L_bound_values():
    # log2(4pi / 2pi) = 1 contributes to the logarithmic factor
    assert u_L_bound(4, 2 * PI) == pytest.approx(2 * math.sqrt(2) * 3 / 2**9, rel=1e-14)
    assert u_L_bound(1, 0.0) == pytest.approx(6 * math.sqrt(2))


@given(orders, freqs)
def test_u_L_range(L, w):
    assert 0 <= u_L(L, w) <= 2 + 1e-12


@given(st.integers(1, 15), freqs.filter(lambda w: distance_to_4pi_lattice(w) > 1e-6))
def test_bound_decreases_in_L(L, w):
    assert u_L_bound(L + 1, w) < u_L_bound(L, w)


@pytest.mark.parametrize("L", [1, 2, 4, 8, 16])
def test_bound_dominates(L):
    w = np.linspace(-16 * PI, 16 * PI, 2**15 + 1)
    assert bound_violations(L, w) == 0


def test_step_convergence_L16():
    neg = np.linspace(-3 * PI, -PI / 2, 2001)
    pos = np.linspace(PI / 2, 3 * PI, 2001)
    assert np.max(step_distance(16, neg)) <= 1e-3
    assert np.max(np.abs(step_distance(16, pos) - 2)) <= 1e-3


# -- cascade -----------------------------------------------------------------


@pytest.fixture(scope="module")
def grid22():
    return cascade_spectra(cached_bank(2, 2))


def test_cascade_normalization(grid22):
    mid = len(grid22.omega) // 2
    assert grid22.omega[mid] == 0.0
    assert abs(grid22.phi_h[mid]) == pytest.approx(1.0, abs=1e-8)
    assert abs(grid22.psi_h[mid]) <= 1e-14
    assert np.all(np.isfinite(grid22.psi_h))


def test_cascade_self_convergence(grid22):
    deep = cascade_spectra(cached_bank(2, 2), depth=30)
    assert np.max(np.abs(deep.psi_h - grid22.psi_h)) <= 1e-10
    assert np.max(np.abs(deep.phi_g - grid22.phi_g)) <= 1e-10


def test_cascade_guards():
    with pytest.raises(TruncationTooShallow):
        cascade_spectra(cached_bank(1, 1), omega_max=1e4, depth=10)
    with pytest.raises(ValueError):
        cascade_spectra(cached_bank(1, 1), n=100)


@pytest.mark.parametrize("L,M", [(2, 2), (3, 3), (4, 4)])
def test_phase_relations(L, M):
    g = cascade_spectra(cached_bank(L, M))
    phi_err, psi_err = verify_phase_relations(g, L)
    assert phi_err <= 1e-7 and psi_err <= 1e-7
    assert np.max(np.abs(np.abs(g.psi_g) - np.abs(g.psi_h))) <= 1e-8
    lhs = np.abs(g.analytic)
    rhs = step_distance(L, g.omega) * np.abs(g.psi_h)
    assert np.max(np.abs(lhs - rhs)) <= 1e-8


def test_parseval(grid22):
    assert parseval_mass(grid22) == pytest.approx(1.0, abs=0.02)


def test_leakage_of_analytic_input(grid22):
    w = grid22.omega
    fake = SpectrumGrid(w, grid22.phi_h, grid22.phi_g,
                        np.where(w > 0, 1.0, 0.0) + 0j, np.where(w > 0, -1j, 0.0), 25)
    assert leakage_measures(fake) == (0.0, 0.0)


def test_leakage_decreases():
    values = {(L, M): leakage_measures(cascade_spectra(cached_bank(L, M), n=2**13 + 1))
              for L in (1, 2, 3) for M in (2, 3)}
    for M in (2, 3):
        for L in (1, 2):
            assert all(a > b for a, b in zip(values[L, M], values[L + 1, M]))
    for L in (1, 2, 3):
        assert all(a > b for a, b in zip(values[L, 2], values[L, 3]))
    assert all(0 < v < 1 for pair in values.values() for v in pair)


# -- regularity --------------------------------------------------------------


def _bank_from_lowpass(h0, M):
    f = LaurentFilter(0, h0)
    return FilterBank(1, M, PhaseChoice.ALL_INSIDE_UNIT_CIRCLE, f, f, f, f, RealPoly())


def test_sobolev_classical_filters():
    # Haar and the four-tap Daubechies filter, factored directly
    s = math.sqrt(2)
    haar = _bank_from_lowpass([s / 2, s / 2], 1)
    assert sobolev_exponent(haar) == pytest.approx(0.5, abs=1e-12)
    r3 = math.sqrt(3)
    d4 = np.array([1 + r3, 3 + r3, 3 - r3, 1 - r3]) / (4 * s)
    assert sobolev_exponent(_bank_from_lowpass(d4, 2)) == pytest.approx(1.0, abs=1e-9)


def test_transition_matrix_shape():
    T = transition_matrix(np.array([0.5, 0.5]))
    assert T.shape == (3, 3)
    assert np.allclose(T.sum(axis=0)[1], 1.0)


@pytest.mark.parametrize("key", sorted(TABLE1))
def test_table1(key):
    M, L = key
    assert sobolev_exponent(cached_bank(L, M)) == pytest.approx(TABLE1[key], abs=0.05)


def test_sobolev_independent_of_phase():
    assert sobolev_exponent(cached_bank(3, 4, "min")) == pytest.approx(
        sobolev_exponent(cached_bank(3, 4, "mid")), abs=1e-9)


def test_analyze_report():
    report, grid = analyze(cached_bank(2, 2), n=2**13 + 1)
    assert report.bound_violations == 0
    assert 0 < report.E1 < 1 and 0 < report.E2 < 1
    assert 0 <= report.uL_max_on_grid <= 2
    assert report.sobolev_exponent == pytest.approx(1.23, abs=0.05)
    assert report.hilbert_slope == pytest.approx(5, abs=0.2)
