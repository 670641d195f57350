"""Frequency-domain analysis of a common-factor filter bank.

Scaling functions and wavelets are evaluated through the cascade product

    phi(w) = prod_{j>=1} 2^-1/2 H0(e^{i w / 2^j}),
    psi(w) = 2^-1/2 H1(e^{i w/2}) phi(w/2),

and compared with the closed-form phase functions

    alpha_L(w) = 2 (-1)^L arctan(tan(w/4)^(2L+1)),
    beta_L(w)  = sum_{j>=1} alpha_L(w / 2^j),
    eta_L(w)   = -alpha_L(w/2 + pi) + beta_L(w/2),

for which phi_G = e^{i beta} e^{-i w/2} phi_H and psi_G = i e^{i eta} psi_H.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EigenFailure, TruncationTooShallow
from .factorize import FilterBank, hilbert_order_check
from .polycore import LaurentFilter
from .thiran import thiran_coeffs

DEFAULT_OMEGA_MAX = 16 * math.pi
DEFAULT_GRID_N = 2**15 + 1
DEFAULT_DEPTH = 25
DEFAULT_BETA_TERMS = 40
FOUR_PI = 4 * math.pi


# ---------------------------------------------------------------------------
# Phase functions
# ---------------------------------------------------------------------------


def alpha(L: int, omega):
    """``2 (-1)^L arctan(tan^(2L+1)(omega/4))`` with ``arctan(+-inf) = +-pi/2``."""
    t = np.tan(np.asarray(omega, dtype=float) / 4.0)
    with np.errstate(over="ignore"):
        p = t ** (2 * L + 1)
    return 2.0 * (-1) ** L * np.arctan(p)


def beta(L: int, omega, terms: int = DEFAULT_BETA_TERMS):
    """Partial sum of ``alpha_L(omega / 2^j)`` for ``j = 1..terms``.

    Returns ``(value, tail_bound)``; the bound is infinite when
    ``|omega| / 2^terms >= pi``.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    omega = np.asarray(omega, dtype=float)
    total = np.zeros_like(omega)
    # smallest terms first
    for j in range(terms, 0, -1):
        total = total + alpha(L, omega / 2.0**j)
    scaled = np.abs(omega) / 2.0**terms
    with np.errstate(over="ignore"):
        tail = np.where(
            scaled < math.pi,
            4.0 * np.abs(np.tan(scaled / 8.0)) ** (2 * L + 1),
            np.inf,
        )
    return total, tail


def eta(L: int, omega, terms: int = DEFAULT_BETA_TERMS):
    omega = np.asarray(omega, dtype=float)
    return -alpha(L, omega / 2.0 + math.pi) + beta(L, omega / 2.0, terms)[0]


def step_distance(L: int, omega, terms: int = DEFAULT_BETA_TERMS):
    """``|1 - e^{i eta_L(omega)}|``, the quantity plotted against the step 2 1_{w>0}."""
    return np.abs(1.0 - np.exp(1j * eta(L, omega, terms)))


def u_L(L: int, omega, terms: int = DEFAULT_BETA_TERMS):
    """Relative analyticity error ``|1 - e^{i eta} - 2 1_{omega > 0}|``.

    The indicator is of the open half-line, so ``omega = 0`` contributes
    ``|1 - e^{i eta(0)}|``.
    """
    omega = np.asarray(omega, dtype=float)
    step = np.where(omega > 0, 2.0, 0.0)
    return np.abs(1.0 - np.exp(1j * eta(L, omega, terms)) - step)


def distance_to_4pi_lattice(omega):
    omega = np.asarray(omega, dtype=float)
    return np.abs(omega - FOUR_PI * np.round(omega / FOUR_PI))


def u_L_bound(L: int, omega):
    """Upper bound on ``u_L``:

    ``2 sqrt2 (log2(max(4pi,|w|)/(2pi)) + 2) (1 - dist(w, 4piZ)/max(4pi,|w|))^(2L+1)``
    """
    omega = np.asarray(omega, dtype=float)
    big = np.maximum(FOUR_PI, np.abs(omega))
    delta = distance_to_4pi_lattice(omega)
    return (
        2.0 * math.sqrt(2.0)
        * (np.log2(big / (2.0 * math.pi)) + 2.0)
        * (1.0 - delta / big) ** (2 * L + 1)
    )


# ---------------------------------------------------------------------------
# Cascade spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumGrid:
    omega: np.ndarray
    phi_h: np.ndarray
    phi_g: np.ndarray
    psi_h: np.ndarray
    psi_g: np.ndarray
    cascade_depth: int
    beta_terms: int = DEFAULT_BETA_TERMS

    @property
    def step(self) -> float:
        return float(self.omega[1] - self.omega[0])

    @property
    def analytic(self) -> np.ndarray:
        """``psi_H + i psi_G``."""
        return self.psi_h + 1j * self.psi_g


def _group_delay_at_dc(x: LaurentFilter) -> float:
    n = np.arange(x.lo, x.hi + 1)
    c = x.as_array()
    return float(np.dot(n, c) / np.sum(c))


def _lowpass_factors(x: LaurentFilter, omega: np.ndarray, levels: int) -> np.ndarray:
    """Rows ``j = 1..levels`` of ``2^-1/2 X(e^{i omega / 2^j})``."""
    out = np.empty((levels, omega.size), dtype=complex)
    for j in range(1, levels + 1):
        out[j - 1] = x(np.exp(1j * omega / 2.0**j)) / math.sqrt(2.0)
    return out


def _phi_pair(x: LaurentFilter, omega: np.ndarray, depth: int) -> tuple[np.ndarray, np.ndarray]:
    """``phi(omega)`` and ``phi(omega / 2)`` from one set of cascade factors.

    The neglected factors ``j > depth`` are replaced by their first-order
    product ``exp(-i tau omega 2^-depth)``, ``tau`` the DC group delay of
    ``x``; the remaining error is ``O((omega 2^-depth)^2)``.
    """
    tau = _group_delay_at_dc(x)
    factors = _lowpass_factors(x, omega, depth + 1)
    full = np.prod(factors[:depth], axis=0) * np.exp(-1j * tau * omega / 2.0**depth)
    half = np.prod(factors[1 : depth + 1], axis=0) * np.exp(
        -1j * tau * omega / 2.0 ** (depth + 1)
    )
    return full, half


def cascade_spectra(bank: FilterBank, omega_max: float = DEFAULT_OMEGA_MAX,
                    n: int = DEFAULT_GRID_N, depth: int = DEFAULT_DEPTH,
                    beta_terms: int = DEFAULT_BETA_TERMS) -> SpectrumGrid:
    if n % 2 == 0:
        raise ValueError("grid size must be odd so that omega = 0 is a sample")
    if depth < 1:
        raise ValueError("cascade depth must be >= 1")
    if omega_max > 2.0**depth * math.pi:
        raise TruncationTooShallow(
            f"omega_max = {omega_max:.4g} exceeds 2^{depth} pi; increase the cascade depth"
        )
    omega = np.linspace(-omega_max, omega_max, n)
    omega[n // 2] = 0.0
    phi_h, phi_h_half = _phi_pair(bank.h0, omega, depth)
    phi_g, phi_g_half = _phi_pair(bank.g0, omega, depth)
    zh = np.exp(0.5j * omega)
    psi_h = bank.h1(zh) * phi_h_half / math.sqrt(2.0)
    psi_g = bank.g1(zh) * phi_g_half / math.sqrt(2.0)
    return SpectrumGrid(omega, phi_h, phi_g, psi_h, psi_g, depth, beta_terms)


def verify_phase_relations(grid: SpectrumGrid, L: int,
                           terms: int | None = None) -> tuple[float, float]:
    """Max deviation from ``phi_G = e^{i beta} e^{-i w/2} phi_H`` and
    ``psi_G = i e^{i eta} psi_H`` over the grid."""
    terms = grid.beta_terms if terms is None else terms
    w = grid.omega
    b = beta(L, w, terms)[0]
    phi_err = np.abs(grid.phi_g - np.exp(1j * (b - 0.5 * w)) * grid.phi_h)
    psi_err = np.abs(grid.psi_g - 1j * np.exp(1j * eta(L, w, terms)) * grid.psi_h)
    return float(np.max(phi_err)), float(np.max(psi_err))


def leakage_measures(grid: SpectrumGrid) -> tuple[float, float]:
    """``E1`` (ratio of peak moduli) and ``E2`` (ratio of energies) of
    ``psi_H + i psi_G`` over negative vs positive frequencies."""
    mag = np.abs(grid.analytic)
    neg = grid.omega < 0
    pos = grid.omega > 0
    e1 = float(np.max(mag[neg]) / np.max(mag[pos]))
    e2 = float(np.sum(mag[neg] ** 2) / np.sum(mag[pos] ** 2))
    return e1, e2


def parseval_mass(grid: SpectrumGrid) -> float:
    """Riemann sum of ``|psi_H|^2 / (2 pi)``; close to 1 for an orthonormal wavelet."""
    return float(np.sum(np.abs(grid.psi_h) ** 2) * grid.step / (2.0 * math.pi))


# ---------------------------------------------------------------------------
# Sobolev regularity
# ---------------------------------------------------------------------------


def residual_factor(bank: FilterBank) -> np.ndarray:
    """Coefficients of ``B`` in ``H0 = sqrt2 ((1 + z^-1)/2)^M B(z)``, with ``B(1) = 1``."""
    if bank.q_poly is not None and not bank.q_poly.is_zero():
        b = np.convolve(bank.q_poly.as_array(), thiran_coeffs(bank.L).coeffs)
    else:
        b = bank.h0.as_array()
        for _ in range(bank.M):
            # synthetic division by (1 + z^-1)
            q = np.empty(len(b) - 1)
            acc = 0.0
            for k in range(len(b) - 1):
                acc = b[k] - acc
                q[k] = acc
            b = q
    return b / np.sum(b)


def transition_matrix(b: np.ndarray) -> np.ndarray:
    """``T[j, k] = 2 p(2j - k)`` for ``j, k in -K..K``, ``p`` the Fourier
    coefficients of ``|B|^2``."""
    p = np.correlate(b, b, mode="full")
    K = len(b) - 1
    idx = np.arange(-K, K + 1)
    m = 2 * idx[:, None] - idx[None, :]
    valid = np.abs(m) <= K
    return np.where(valid, 2.0 * p[np.clip(m + K, 0, 2 * K)], 0.0)


def sobolev_exponent(bank: FilterBank) -> float:
    """``M - log2(rho) / 2`` with ``rho`` the spectral radius of the transfer
    operator of ``|B|^2``."""
    if bank.M < 1:
        raise ValueError("Sobolev estimate needs at least one vanishing moment")
    T = transition_matrix(residual_factor(bank))
    try:
        ev = np.linalg.eigvals(T)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    rho = float(np.max(np.abs(ev)))
    if not np.isfinite(rho) or rho <= 0:
        raise EigenFailure(f"degenerate spectral radius {rho}")
    return bank.M - 0.5 * math.log2(rho)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticityReport:
    E1: float
    E2: float
    uL_max_on_grid: float
    bound_violations: int
    hilbert_slope: float
    sobolev_exponent: float
    phi_relation_defect: float
    psi_relation_defect: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def bound_violations(L: int, omega: np.ndarray, terms: int = DEFAULT_BETA_TERMS,
                     exclusion: float = 0.1, slack: float = 1e-9) -> int:
    """Grid points where ``u_L`` exceeds ``min(2, bound)``, outside a
    neighbourhood of ``4 pi Z``."""
    omega = np.asarray(omega, dtype=float)
    keep = distance_to_4pi_lattice(omega) > exclusion
    u = u_L(L, omega[keep], terms)
    bound = np.minimum(2.0, u_L_bound(L, omega[keep]))
    return int(np.count_nonzero(u > bound + slack))


def analyze(bank: FilterBank, omega_max: float = DEFAULT_OMEGA_MAX, n: int = DEFAULT_GRID_N,
            depth: int = DEFAULT_DEPTH, beta_terms: int = DEFAULT_BETA_TERMS
            ) -> tuple[AnalyticityReport, SpectrumGrid]:
    grid = cascade_spectra(bank, omega_max, n, depth, beta_terms)
    e1, e2 = leakage_measures(grid)
    u = u_L(bank.L, grid.omega, beta_terms)
    phi_err, psi_err = verify_phase_relations(grid, bank.L, beta_terms)
    report = AnalyticityReport(
        E1=e1,
        E2=e2,
        uL_max_on_grid=float(np.max(u)),
        bound_violations=bound_violations(bank.L, grid.omega, beta_terms),
        hilbert_slope=hilbert_order_check(bank),
        sobolev_exponent=sobolev_exponent(bank),
        phi_relation_defect=phi_err,
        psi_relation_defect=psi_err,
    )
    return report, grid
