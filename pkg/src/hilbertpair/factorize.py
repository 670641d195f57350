"""Spectral factorization of ``R(z) = r((2+z+1/z)/4)`` and assembly of the
common-factor filter bank

    H0(z) = F(z) D_L(z),    G0(z) = F(z) D_L(1/z) z^-L,    F(z) = Q(z) (1+1/z)^M,
    H1(z) = z^-1 H0(-1/z),  G1(z) = z^-1 G0(-1/z).

Phase naming follows the source construction: keeping every z-root inside the
unit circle is labelled ``"mid"``; the alternating selection is labelled
``"min"``. This is the reverse of the usual minimum-phase vocabulary.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import bezout
from .errors import ConjugatePairingFailure, DegenerateFit, NotNonnegative
from .polycore import LaurentFilter, RealPoly, poly_roots
from .thiran import thiran_coeffs

SQRT2 = math.sqrt(2.0)
PR_GRID = 4096
POSITIVITY_GRID = 4097
PAIRING_TOL = 1e-6


class PhaseChoice(enum.Enum):
    ALL_INSIDE_UNIT_CIRCLE = "mid"
    ALTERNATING_PAIRS = "min"

    @property
    def label(self) -> str:
        return self.value


@dataclass(frozen=True)
class FilterBank:
    L: int
    M: int
    phase: PhaseChoice
    h0: LaurentFilter
    g0: LaurentFilter
    h1: LaurentFilter
    g1: LaurentFilter
    q_poly: RealPoly
    r: RealPoly | None = None
    method: str = "recursive"


def unit_circle(n: int = PR_GRID) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


# ---------------------------------------------------------------------------
# Riesz factorization
# ---------------------------------------------------------------------------


def lift_to_circle(r: RealPoly, reflected: bool = False) -> LaurentFilter:
    """Symmetric Laurent filter ``R(z) = r((2+z+1/z)/4)``.

    With ``reflected=True`` the argument is ``r(1 - y)``, so the inner map is
    ``(2-z-1/z)/4``.
    """
    base = LaurentFilter(-1, (-0.25, 0.5, -0.25) if reflected else (0.25, 0.5, 0.25))
    out = LaurentFilter()
    for c in reversed(r.coeffs):
        out = out * base + LaurentFilter(0, (c,))
    return out


def circle_values(r: RealPoly, omega: np.ndarray, reflected: bool = False) -> np.ndarray:
    """``R(e^{i omega})`` evaluated as ``r(cos^2(omega/2))``."""
    return r(np.sin(0.5 * omega) ** 2) if reflected else r(np.cos(0.5 * omega) ** 2)


def check_nonnegative(r: RealPoly, rel_tol: float = 1e-12) -> tuple[float, float]:
    """Minimum of ``r`` over [0, 1] (dense grid plus interior critical points).

    Raises :class:`NotNonnegative` when the minimum is negative beyond
    roundoff; returns ``(y_min, r(y_min))`` otherwise. The interval is
    symmetric under ``y -> 1 - y``, so a reflected polynomial is checked the
    same way (the reported location is then in the reflected variable).
    """
    if r.is_zero():
        raise NotNonnegative("r is identically zero", 0.0, 0.0)
    y = np.linspace(0.0, 1.0, POSITIVITY_GRID)
    crit = []
    dr = r.derivative()
    if dr.degree >= 1:
        for rho in poly_roots(dr):
            if rho.imag == 0.0 and 0.0 <= rho.real <= 1.0:
                crit.append(rho.real)
    y = np.concatenate([y, crit])
    v = r(y)
    k = int(np.argmin(v))
    scale = max(abs(c) for c in r.coeffs)
    if v[k] < -rel_tol * scale:
        raise NotNonnegative(
            f"r({y[k]:.6g}) = {v[k]:.3e} < 0: no Riesz factorization of minimal degree",
            float(y[k]),
            float(v[k]),
        )
    return float(y[k]), float(v[k])


def _inside_root(t: complex) -> complex:
    """Root of ``z^2 - 2 t z + 1`` with modulus <= 1 (``t = 2 y0 - 1``)."""
    sq = np.sqrt(complex(t * t - 1.0))
    big = t + sq if abs(t + sq) >= abs(t - sq) else t - sq
    z = 1.0 / big
    if isinstance(t, float) or complex(t).imag == 0.0:
        if abs(complex(t).real) >= 1.0:
            z = complex(z.real, 0.0)
    return z


def _root_groups(r: RealPoly, reflected: bool = False) -> list[list[complex]]:
    """Inside z-roots of ``R``, grouped so each group is conjugate-closed.

    A root ``y0`` of ``r`` contributes the reciprocal pair solving
    ``z^2 - (4 y0 - 2) z + 1 = 0``.
    """
    if r.degree < 1:
        return []
    groups = []
    for rho in poly_roots(r):
        if rho.imag < 0.0:
            continue
        t = 1.0 - 2.0 * rho if reflected else 2.0 * rho - 1.0
        if rho.imag == 0.0:
            t = t.real
        z = _inside_root(t)
        # (z, 1/z) must both solve z^2 - 2 t z + 1 = 0
        if abs(_pair_sum(z) - t) > PAIRING_TOL * (1.0 + abs(t)):
            raise ConjugatePairingFailure(f"reciprocal pairing failed for y0 = {rho}")
        groups.append([z] if rho.imag == 0.0 else [z, z.conjugate()])
    return groups


def _pair_sum(z: complex) -> complex:
    return 0.5 * (z + 1.0 / z)


def select_roots(r: RealPoly, phase: PhaseChoice, reflected: bool = False) -> list[complex]:
    groups = _root_groups(r, reflected)
    if phase is PhaseChoice.ALL_INSIDE_UNIT_CIRCLE:
        return [z for g in groups for z in g]
    groups.sort(key=lambda g: (abs(np.angle(g[0])), abs(g[0])))
    chosen = []
    for k, g in enumerate(groups):
        chosen.extend(g if k % 2 == 0 else [1.0 / z for z in g])
    return chosen


def riesz_factor(r: RealPoly, phase: PhaseChoice = PhaseChoice.ALL_INSIDE_UNIT_CIRCLE,
                 reflected: bool = False, check: bool = True) -> LaurentFilter:
    """Causal real ``Q`` with ``Q(z) Q(1/z) = r((2+z+1/z)/4)`` and ``Q(1) > 0``.

    Pass ``reflected=True`` with ``r(1 - y)`` for the well-conditioned route.
    """
    phase = PhaseChoice(phase)
    check_nonnegative(r)
    zs = select_roots(r, phase, reflected)
    c = np.array([1.0 + 0j])
    for z in zs:
        c = np.convolve(c, [1.0, -z])
    if np.max(np.abs(c.imag)) > 1e-8 * np.max(np.abs(c)):
        raise ConjugatePairingFailure("selected roots are not closed under conjugation")
    c = c.real
    r_at_1 = r.coeffs[0] if reflected else r(1.0)
    Q = LaurentFilter(0, c * (math.sqrt(max(r_at_1, 0.0)) / float(np.sum(c))))
    if check:
        omega = 2 * np.pi * np.arange(PR_GRID) / PR_GRID
        R = circle_values(r, omega, reflected)
        err = np.max(np.abs(np.abs(Q(np.exp(1j * omega))) ** 2 - R))
        ref = np.max(np.abs(R))
        if err > 1e-9 * ref:
            raise ConjugatePairingFailure(
                f"factorization round trip error {err:.3e} exceeds 1e-9 * {ref:.3e}"
            )
    return Q


# ---------------------------------------------------------------------------
# Filter bank
# ---------------------------------------------------------------------------


def highpass(lowpass: LaurentFilter) -> LaurentFilter:
    """``z^-1 X(-1/z)``."""
    return lowpass.reverse().negate_arg().delay(1)


def binomial_factor(M: int) -> LaurentFilter:
    """``(1 + 1/z)^M``."""
    out = LaurentFilter(0, (1.0,))
    for _ in range(M):
        out = out * LaurentFilter(0, (1.0, 1.0))
    return out


def assemble_bank(L: int, M: int, Q: LaurentFilter,
                  phase: PhaseChoice = PhaseChoice.ALL_INSIDE_UNIT_CIRCLE,
                  r: RealPoly | None = None, method: str = "recursive") -> FilterBank:
    """Build ``(h0, g0, h1, g1)`` from the factor ``Q``.

    ``Q`` is rescaled once so that ``F(1) = sqrt(2) (2L+1) 2^-2L``, which
    makes ``H0(1) = G0(1) = sqrt(2)``.
    """
    D = thiran_coeffs(L).filter
    F = Q * binomial_factor(M)
    kappa = SQRT2 * (2 * L + 1) * 2.0 ** (-2 * L) / float(np.sum(F.coeffs))
    Q = Q * kappa
    F = F * kappa
    h0 = F * D
    g0 = F * D.reverse().delay(L)
    return FilterBank(L, M, phase, h0, g0, highpass(h0), highpass(g0),
                      RealPoly(Q.coeffs), r, method)


def design_bank(L: int, M: int, phase: PhaseChoice | str = PhaseChoice.ALL_INSIDE_UNIT_CIRCLE,
                method: bezout.Method | str = bezout.Method.RECURSIVE_INTERP) -> FilterBank:
    """Solve for ``r``, factor it, and assemble the bank."""
    phase = PhaseChoice(phase)
    method = bezout.Method(method)
    sol = bezout.solve(L, M, method)
    Q = riesz_factor(sol.r_reflected, phase, reflected=True)
    return assemble_bank(L, M, Q, phase, sol.r, method.value)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def pr_defect(x: LaurentFilter, n: int = PR_GRID) -> float:
    """Half-band defect of one lowpass filter, on the circle and in lags."""
    # |X(z)|^2 + |X(-z)|^2 keeps only the even lags of the autocorrelation,
    # so the circle defect is evaluated from those lags directly
    c = x.as_array()
    acf = np.correlate(c, c, mode="full")
    mid = len(c) - 1
    lags = np.arange(-mid, mid + 1)
    even = lags % 2 == 0
    excess = 2.0 * acf[even] - 2.0 * (lags[even] == 0)
    z = unit_circle(n)
    circle = np.max(np.abs(np.polynomial.polynomial.polyval(z, excess) * z ** float(lags[even][0])))
    lag_defect = np.max(np.abs(excess)) if excess.size else 0.0
    return float(max(circle, lag_defect))


def verify_pr(bank: FilterBank, n: int = PR_GRID) -> float:
    return max(pr_defect(bank.h0, n), pr_defect(bank.g0, n))


def loglog_slope(x: np.ndarray, y: np.ndarray, floor: float,
                 min_points: int = 6, min_decades: float = 0.25) -> float:
    """Least-squares slope of ``log y`` on ``log x`` using points above ``floor``.

    Raises :class:`DegenerateFit` when too few points clear the floor.
    """
    keep = y > floor
    if keep.sum() < min_points or np.log10(x[keep].max() / x[keep].min()) < min_decades:
        raise DegenerateFit(f"only {int(keep.sum())} samples above noise floor {floor:.1e}")
    return float(np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)[0])


def _noise_floor(*filters: LaurentFilter) -> float:
    # measured evaluation noise is about eps/2 * sum|c|; stay 200x above it
    return 1e2 * np.finfo(float).eps * sum(float(np.sum(np.abs(f.coeffs))) for f in filters)


SLOPE_OMEGA = np.geomspace(1e-3, 1e-1, 201)


def hilbert_order_check(bank: FilterBank, omega: np.ndarray = SLOPE_OMEGA) -> float:
    """Fitted order of ``|G0 - H0 e^{-i w/2}|`` near zero frequency.

    Returns ``inf`` when the defect sits below floating-point resolution over
    the whole window.
    """
    z = np.exp(1j * omega)
    defect = np.abs(bank.g0(z) - bank.h0(z) * np.exp(-0.5j * omega))
    try:
        return loglog_slope(omega, defect, _noise_floor(bank.h0, bank.g0))
    except DegenerateFit:
        return math.inf


def vanishing_moment_order(bank: FilterBank, omega: np.ndarray = SLOPE_OMEGA) -> float:
    """Fitted order of the zero of ``H0`` at ``z = -1``; ``inf`` on underflow."""
    v = np.abs(bank.h0(-np.exp(1j * omega)))
    try:
        return loglog_slope(omega, v, _noise_floor(bank.h0))
    except DegenerateFit:
        return math.inf
