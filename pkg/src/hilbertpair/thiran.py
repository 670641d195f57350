"""Maximally flat half-sample delay factor ``D_L``.

``D_L(z) = 1 + d(1) z^-1 + ... + d(L) z^-L`` is chosen so that the all-pass
ratio ``z^-L D_L(1/z) / D_L(z)`` matches a half-sample delay to order
``2L+1`` at zero frequency. Its coefficients are
``d(l) = C(2L+1, 2(L-l)) / (2L+1)``, and ``D_L`` admits the closed form

    D_L(z) = z^-L [(1 + sqrt z)^(2L+1) + (1 - sqrt z)^(2L+1)] / (2 (2L+1))
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import InvalidOrder, ZeroArgument
from .polycore import LaurentFilter

MAX_ORDER = 64


@dataclass(frozen=True)
class ThiranFilter:
    L: int
    filter: LaurentFilter

    @property
    def coeffs(self) -> tuple[float, ...]:
        return self.filter.coeffs

    def __call__(self, z):
        return self.filter(z)


def _check_order(L: int) -> None:
    if not isinstance(L, (int, np.integer)) or L < 1:
        raise InvalidOrder(f"Thiran order must be a positive integer, got {L!r}")
    if L > MAX_ORDER:
        raise InvalidOrder(f"Thiran order {L} exceeds supported maximum {MAX_ORDER}")


def thiran_exact(L: int) -> list[Fraction]:
    """Exact rational coefficients ``d(0..L)`` via integer binomials."""
    _check_order(L)
    return [Fraction(comb(2 * L + 1, 2 * (L - ell)), 2 * L + 1) for ell in range(L + 1)]


def thiran_product_coeffs(L: int) -> np.ndarray:
    """Coefficients from the running-product formula (floating point).

    ``d(l) = (-1)^l C(L, l) prod_{k<l} (1/2 - L + k) / (3/2 + k)``
    """
    _check_order(L)
    d = np.empty(L + 1)
    d[0] = 1.0
    running = 1.0
    for ell in range(1, L + 1):
        k = ell - 1
        running *= (0.5 - L + k) / (1.5 + k)
        d[ell] = (-1) ** ell * comb(L, ell) * running
    return d


def thiran_coeffs(L: int) -> ThiranFilter:
    return ThiranFilter(L, LaurentFilter(0, [float(x) for x in thiran_exact(L)]))


def thiran_closed_eval(L: int, z):
    """Evaluate ``D_L`` through the closed form; valid for any nonzero ``z``."""
    _check_order(L)
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ZeroArgument("D_L closed form is undefined at z = 0")
    w = np.sqrt(z)
    n = 2 * L + 1
    return z ** (-L) * ((1 + w) ** n + (1 - w) ** n) / (2 * n)


def thiran_ratio_phase(L: int, omega):
    """``e^{-i omega L} D_L(e^{-i omega}) / D_L(e^{i omega})``, unimodular."""
    omega = np.asarray(omega, dtype=float)
    D = thiran_coeffs(L).filter
    z = np.exp(1j * omega)
    return np.exp(-1j * omega * L) * D(np.conj(z)) / D(z)
