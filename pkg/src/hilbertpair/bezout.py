"""Minimal-degree solution ``r`` of the Bezout equation

    r(1-y) s(1-y) + r(y) s(y) = (2L+1)^2 2^(1-2L-2M),
    s(y) = y^M sum_n C(2L+1, 2n) y^n,

computed three independent ways: interpolation plus degree recursion
(default), the classical half-band linear system, and exact rational
extended Euclid (oracle).

Internally every method works with the reflected polynomial
``rr(x) = r(1 - x)``. Its coefficients are all positive, so it is evaluated
and factored without cancellation; the power-of-``y`` coefficients of ``r``
can lose up to nine digits to cancellation near ``y = 1`` for large L, M.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import CostGuard, IllConditioned, InvalidOrder, RecursionDefect
from .polycore import RatPoly, RealPoly, rat_poly_ext_euclid
from .thiran import thiran_coeffs

RESIDUAL_GRID = 1025
COND_LIMIT = 1e12
EXACT_MAX_ORDER = 12


class Method(enum.Enum):
    LINEAR_SYSTEM = "linear"
    RECURSIVE_INTERP = "recursive"
    EXACT_RATIONAL = "exact"


# Relative (to the right-hand side) residual tolerance per method.
RESIDUAL_TOL = {
    Method.RECURSIVE_INTERP: 1e-9,
    Method.LINEAR_SYSTEM: 1e-9,
    Method.EXACT_RATIONAL: 1e-13,
}


@dataclass(frozen=True)
class BezoutProblem:
    L: int
    M: int

    def __post_init__(self):
        if self.L < 1 or self.M < 0:
            raise InvalidOrder(f"need L >= 1 and M >= 0, got L={self.L}, M={self.M}")

    @property
    def s(self) -> RealPoly:
        return s_poly(self.L, self.M)

    @property
    def rhs(self) -> float:
        return float(rhs_exact(self.L, self.M))


@dataclass(frozen=True)
class BezoutSolution:
    """``r`` in powers of ``y``; ``r_reflected`` is ``r(1 - y)`` in powers of ``y``
    and is the representation the residual and the factorization use."""

    r: RealPoly
    method: Method
    residual: float
    L: int
    M: int
    r_reflected: RealPoly = field(default_factory=RealPoly)
    exact: tuple[Fraction, ...] | None = field(default=None, compare=False)
    condition: float | None = None

    @property
    def tolerance(self) -> float:
        return RESIDUAL_TOL[self.method] * float(rhs_exact(self.L, self.M))

    @property
    def ok(self) -> bool:
        return self.residual <= self.tolerance


def rhs_exact(L: int, M: int) -> Fraction:
    return Fraction((2 * L + 1) ** 2) * Fraction(2) ** (1 - 2 * L - 2 * M)


def _s_int_coeffs(L: int, M: int) -> list[int]:
    return [0] * M + [comb(2 * L + 1, 2 * n) for n in range(L + 1)]


def s_poly(L: int, M: int) -> RealPoly:
    if L < 1 or M < 0:
        raise InvalidOrder(f"need L >= 1 and M >= 0, got L={L}, M={M}")
    return RealPoly(_s_int_coeffs(L, M))


def s_roots(L: int) -> np.ndarray:
    """Roots of ``sum_n C(2L+1, 2n) y^n``: ``-tan^2(pi (2k+1) / (2(2L+1)))``."""
    if L < 1:
        raise InvalidOrder(f"need L >= 1, got {L}")
    k = np.arange(L)
    return -np.tan(np.pi * (2 * k + 1) / (2 * (2 * L + 1))) ** 2


def bezout_residual(r: RealPoly, L: int, M: int, n: int = RESIDUAL_GRID,
                    reflected: bool = False) -> float:
    """Max defect of the Bezout identity on Chebyshev-spaced points of [0, 1].

    With ``reflected=True`` the polynomial passed is ``r(1 - y)``.
    """
    theta = np.pi * np.arange(n) / (n - 1)
    y = np.sin(0.5 * theta) ** 2
    y_c = np.cos(0.5 * theta) ** 2  # 1 - y without rounding loss
    s = s_poly(L, M)
    if reflected:
        lhs = r(y) * s(y_c) + r(y_c) * s(y)
    else:
        lhs = r(y_c) * s(y_c) + r(y) * s(y)
    return float(np.max(np.abs(lhs - float(rhs_exact(L, M)))))


def antisymmetry_check(q: RealPoly, tol: float = 1e-12) -> bool:
    """True iff ``q(1-y) == -q(y)`` coefficient-wise."""
    d = q.reflect() + q
    return all(abs(c) <= tol for c in d.coeffs)


def _finish(rr: RealPoly, method: Method, L: int, M: int, **extra) -> BezoutSolution:
    """Package a solution given its reflected form ``rr(x) = r(1 - x)``."""
    return BezoutSolution(rr.reflect(), method, bezout_residual(rr, L, M, reflected=True),
                          L, M, r_reflected=rr, **extra)


# ---------------------------------------------------------------------------
# Interpolation + recursion
# ---------------------------------------------------------------------------


def _interp_r0(L: int) -> RealPoly:
    """``r_{L,0}(1 - x)`` by Lagrange interpolation.

    ``r_{L,0}`` takes the value ``rhs / s_{L,0}(1 - y_k)`` at ``1 - y_k``,
    where ``y_k`` are the roots of ``s_{L,0}``; in the reflected variable the
    nodes are the ``y_k`` themselves.
    """
    nodes = s_roots(L)
    values = float(rhs_exact(L, 0)) / s_poly(L, 0)(1.0 - nodes)
    weights = np.array(
        [1.0 / np.prod([nodes[k] - nodes[m] for m in range(L) if m != k]) for k in range(L)]
    )
    rr = RealPoly()
    for k in range(L):
        basis = RealPoly((1.0,))
        for m in range(L):
            if m != k:
                basis = basis * RealPoly((-nodes[m], 1.0))
        rr = rr + basis * float(weights[k] * values[k])
    return rr


def recursion_step(rr_prev: RealPoly, L: int, M: int, tol: float = 1e-9) -> RealPoly:
    """One step ``r_{L,M-1} -> r_{L,M}``, in the reflected variable.

    ``4 y r_{L,M}(y) = r_{L,M-1}(y) - 2^-2L r_{L,M-1}(0) (1-2y) s_{L,M-1}(1-y)``
    becomes, with ``x = 1 - y``,
    ``4 (1-x) rr_M(x) = rr_{M-1}(x) - 2^-2L rr_{M-1}(1) (2x-1) s_{L,M-1}(x)``.
    """
    t = rr_prev - RealPoly((-1.0, 2.0)) * s_poly(L, M - 1) * (
        2.0 ** (-2 * L) * rr_prev(1.0)
    )
    norm = float(np.sum(np.abs(t.coeffs)))
    remainder = float(math.fsum(t.coeffs))
    if abs(remainder) > tol * max(norm, 1e-300):
        raise RecursionDefect(
            f"right-hand side does not vanish at y = 0 at step M={M}: "
            f"{remainder:.3e} (scale {norm:.3e})"
        )
    # divide by (1 - x): quotient coefficients are partial sums
    quotient = np.cumsum(t.coeffs)[:-1]
    return RealPoly(quotient / 4.0)


def solve_recursive(L: int, M: int) -> BezoutSolution:
    BezoutProblem(L, M)
    rr = _interp_r0(L)
    for m in range(1, M + 1):
        rr = recursion_step(rr, L, m)
    return _finish(rr, Method.RECURSIVE_INTERP, L, M)


# ---------------------------------------------------------------------------
# Half-band linear system
# ---------------------------------------------------------------------------


def autocorrelation_s(L: int, M: int) -> np.ndarray:
    """Coefficients of ``S(z) = (2+z+1/z)^M D_L(z) D_L(1/z)``, length 2(M+L)+1."""
    d = np.array(thiran_coeffs(L).coeffs)
    s1 = np.array([comb(2 * M, k) for k in range(2 * M + 1)], dtype=float)
    s2 = np.convolve(d, d[::-1])
    return np.convolve(s1, s2)


def halfband_matrix(L: int, M: int) -> np.ndarray:
    """Odd rows (0-based) of the full convolution matrix of ``s``."""
    s = autocorrelation_s(L, M)
    n = 2 * (M + L) - 1
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    k = 2 * i + 1 - j
    valid = (k >= 0) & (k < len(s))
    return np.where(valid, s[np.clip(k, 0, len(s) - 1)], 0.0)


def symmetric_to_y(rho: np.ndarray, reflected: bool = False) -> RealPoly:
    """Map a symmetric Laurent filter ``R`` (centered) to ``r`` with
    ``R(z) = r((2+z+1/z)/4)``, or to ``r(1 - y)`` when ``reflected``.

    On the unit circle ``R = rho_0 + 2 sum_j rho_j cos(j w)`` and
    ``cos w = 2y - 1``, so Chebyshev polynomials do the conversion.
    """
    K = (len(rho) - 1) // 2
    half = 0.5 * (rho[K:] + rho[K::-1])
    x = RealPoly((1.0, -2.0)) if reflected else RealPoly((-1.0, 2.0))
    t_prev, t_cur = RealPoly((1.0,)), x
    r = RealPoly((half[0],))
    for j in range(1, K + 1):
        r = r + t_cur * (2.0 * half[j])
        t_prev, t_cur = t_cur, x * t_cur * 2.0 - t_prev
    return r


def solve_linear_system(L: int, M: int, cond_limit: float = COND_LIMIT) -> BezoutSolution:
    if M < 1:
        raise InvalidOrder("the linear-system method needs M >= 1")
    BezoutProblem(L, M)
    C = halfband_matrix(L, M)
    cond = float(np.linalg.cond(C))
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditioned(
            f"half-band system for (M, L) = ({M}, {L}) has condition {cond:.3e} "
            f"> {cond_limit:.0e}",
            condition=cond,
        )
    b = np.zeros(C.shape[0])
    b[(C.shape[0] - 1) // 2] = 1.0
    rho = np.linalg.solve(C, b)
    return _finish(symmetric_to_y(rho, reflected=True), Method.LINEAR_SYSTEM, L, M, condition=cond)


# ---------------------------------------------------------------------------
# Exact rational oracle
# ---------------------------------------------------------------------------


def solve_exact_rational(L: int, M: int) -> RatPoly:
    if L + M > EXACT_MAX_ORDER:
        raise CostGuard(f"exact solve limited to L+M <= {EXACT_MAX_ORDER}")
    BezoutProblem(L, M)
    s = RatPoly(_s_int_coeffs(L, M))
    a = s.reflect()
    u, v, g = rat_poly_ext_euclid(a, s)
    if g.degree != 0:
        raise ArithmeticError("s(y) and s(1-y) share a factor")
    # v * s + u * s(1-y) = 1; reduce the s-cofactor modulo s(1-y)
    return (v * rhs_exact(L, M)) % a


def solve_exact(L: int, M: int) -> BezoutSolution:
    r = solve_exact_rational(L, M)
    return _finish(r.reflect().to_real(), Method.EXACT_RATIONAL, L, M, exact=r.coeffs)


SOLVERS = {
    Method.RECURSIVE_INTERP: solve_recursive,
    Method.LINEAR_SYSTEM: solve_linear_system,
    Method.EXACT_RATIONAL: solve_exact,
}


def solve(L: int, M: int, method: Method | str = Method.RECURSIVE_INTERP) -> BezoutSolution:
    return SOLVERS[Method(method)](L, M)
