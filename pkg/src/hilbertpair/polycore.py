"""Polynomial plumbing: real polynomials, exact rational polynomials, FIR
(Laurent) filters, and an Aberth-Ehrlich root finder.

All containers are immutable. Coefficients are stored in ascending order of
powers, so ``RealPoly((1, 3))`` is ``1 + 3y``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ConjugatePairingFailure, NonConvergence

NEG_INF = -math.inf
EPS = float(np.finfo(float).eps)


def _trim(values: Iterable, zero=0.0) -> tuple:
    out = list(values)
    while out and out[-1] == zero:
        out.pop()
    return tuple(out)


def _horner(coeffs: Sequence, x):
    acc = 0.0 * x if isinstance(x, np.ndarray) else 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# Real polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealPoly:
    """Dense real polynomial in one variable, ascending coefficients."""

    coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(float(c) for c in self.coeffs))

    @classmethod
    def constant(cls, c: float) -> "RealPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: float = 1.0) -> "RealPoly":
        return cls((0.0,) * k + (c,))

    @property
    def degree(self):
        """Highest nonzero power; ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self) -> int:
        return len(self.coeffs)

    def __call__(self, x):
        return _horner(self.coeffs, x)

    def __neg__(self) -> "RealPoly":
        return RealPoly(-c for c in self.coeffs)

    def __add__(self, other) -> "RealPoly":
        other = _as_real_poly(other)
        n = max(len(self), len(other))
        a = self.coeffs + (0.0,) * (n - len(self))
        b = other.coeffs + (0.0,) * (n - len(other))
        return RealPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other) -> "RealPoly":
        return self + (-_as_real_poly(other))

    def __rsub__(self, other) -> "RealPoly":
        return _as_real_poly(other) - self

    def __mul__(self, other) -> "RealPoly":
        if isinstance(other, (int, float)):
            return RealPoly(other * c for c in self.coeffs)
        other = _as_real_poly(other)
        if self.is_zero() or other.is_zero():
            return RealPoly()
        return RealPoly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def compose(self, inner: "RealPoly") -> "RealPoly":
        """Return ``self(inner(y))``."""
        out = RealPoly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def reflect(self) -> "RealPoly":
        """Return ``y -> self(1 - y)``."""
        return self.compose(RealPoly((1.0, -1.0)))

    def derivative(self) -> "RealPoly":
        return RealPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)


def _as_real_poly(p) -> RealPoly:
    if isinstance(p, RealPoly):
        return p
    if isinstance(p, (int, float)):
        return RealPoly((p,))
    return RealPoly(p)


def poly_eval(p: RealPoly, x):
    return p(x)


def poly_add(a: RealPoly, b: RealPoly) -> RealPoly:
    return a + b


def poly_mul(a: RealPoly, b: RealPoly) -> RealPoly:
    return a * b


def poly_compose(outer: RealPoly, inner: RealPoly) -> RealPoly:
    return outer.compose(inner)


def poly_shift_reflect(p: RealPoly) -> RealPoly:
    return p.reflect()


# ---------------------------------------------------------------------------
# Exact rational polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatPoly:
    """Polynomial with exact :class:`fractions.Fraction` coefficients."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", _trim((Fraction(c) for c in self.coeffs), Fraction(0))
        )

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        return _horner(self.coeffs, Fraction(x) if isinstance(x, int) else x)

    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_rat_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = Fraction(0)
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = other.coeffs + (z,) * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_rat_poly(other))

    def __rsub__(self, other):
        return _as_rat_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPoly(other * c for c in self.coeffs)
        other = _as_rat_poly(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = _as_rat_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 1)
        lead = other.leading
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return RatPoly(quot), RatPoly(rem[:dq] if dq > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def compose(self, inner: "RatPoly") -> "RatPoly":
        out = RatPoly()
        for c in reversed(self.coeffs):
            out = out * inner + RatPoly((c,))
        return out

    def reflect(self) -> "RatPoly":
        return self.compose(RatPoly((1, -1)))

    def monic(self) -> "RatPoly":
        return RatPoly(c / self.leading for c in self.coeffs)

    def to_real(self) -> RealPoly:
        return RealPoly(float(c) for c in self.coeffs)


def _as_rat_poly(p) -> RatPoly:
    if isinstance(p, RatPoly):
        return p
    if isinstance(p, (int, Fraction)):
        return RatPoly((p,))
    return RatPoly(p)


def rat_poly_ext_euclid(a: RatPoly, b: RatPoly) -> tuple[RatPoly, RatPoly, RatPoly]:
    """Extended Euclid: ``u*a + v*b == g`` with ``g`` the monic gcd."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    r0, r1 = a, b
    s0, s1 = RatPoly((1,)), RatPoly()
    t0, t1 = RatPoly(), RatPoly((1,))
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lead = r0.leading
    return s0 * (1 / lead), t0 * (1 / lead), r0.monic()


# ---------------------------------------------------------------------------
# Laurent (two-sided FIR) filters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentFilter:
    """FIR filter ``sum_k coeffs[k] * z**-(lo + k)``."""

    lo: int = 0
    coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        c = [float(x) for x in self.coeffs]
        lo = int(self.lo)
        while c and c[0] == 0.0:
            c.pop(0)
            lo += 1
        while c and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "lo", lo if c else 0)

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)

    def __call__(self, z):
        """Evaluate at (an array of) nonzero complex ``z``."""
        z = np.asarray(z, dtype=complex)
        w = 1.0 / z
        return _horner(self.coeffs, w) * w**self.lo

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return LaurentFilter(self.lo, (other * c for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return LaurentFilter()
        return LaurentFilter(self.lo + other.lo, np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __add__(self, other: "LaurentFilter") -> "LaurentFilter":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = np.zeros(hi - lo + 1)
        out[self.lo - lo : self.hi - lo + 1] += self.coeffs
        out[other.lo - lo : other.hi - lo + 1] += other.coeffs
        return LaurentFilter(lo, out)

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def reverse(self) -> "LaurentFilter":
        """``A(1/z)``."""
        return LaurentFilter(-self.hi, self.coeffs[::-1])

    def negate_arg(self) -> "LaurentFilter":
        """``A(-z)``."""
        return LaurentFilter(
            self.lo, (c * (-1) ** ((self.lo + k) % 2) for k, c in enumerate(self.coeffs))
        )

    def delay(self, n: int) -> "LaurentFilter":
        """Multiply by ``z**-n``."""
        return LaurentFilter(self.lo + n, self.coeffs)

    def coefficient(self, power: int) -> float:
        """Coefficient of ``z**-power``."""
        k = power - self.lo
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0


def laurent_mul(a: LaurentFilter, b: LaurentFilter) -> LaurentFilter:
    return a * b


def laurent_reverse(a: LaurentFilter) -> LaurentFilter:
    return a.reverse()


def laurent_negate_arg(a: LaurentFilter) -> LaurentFilter:
    return a.negate_arg()


def laurent_eval(a: LaurentFilter, z):
    return a(z)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexRootSet:
    """Roots of a real polynomial, repeated according to multiplicity."""

    roots: tuple[complex, ...]
    leading: float

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def as_array(self) -> np.ndarray:
        return np.array(self.roots, dtype=complex)

    def real(self) -> list[float]:
        return sorted(r.real for r in self.roots if r.imag == 0.0)

    def upper(self) -> list[complex]:
        """Members of conjugate pairs with positive imaginary part."""
        return [r for r in self.roots if r.imag > 0.0]

    def multiplicities(self, tol: float = 1e-6) -> list[tuple[complex, int]]:
        groups: list[list[complex]] = []
        for r in self.roots:
            for g in groups:
                if abs(g[0] - r) <= tol * (1 + abs(r)):
                    g.append(r)
                    break
            else:
                groups.append([r])
        return [(complex(np.mean(g)), len(g)) for g in groups]

    def to_poly(self) -> RealPoly:
        c = np.array([1.0 + 0j])
        for r in self.roots:
            c = np.convolve(c, [-r, 1.0])
        return RealPoly(self.leading * c.real)


def _cauchy_radius(a: np.ndarray) -> float:
    # a is monic, ascending
    return 1.0 + float(np.max(np.abs(a[:-1])))


def _aberth(a: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, bool]:
    n = len(a) - 1
    da = a[1:] * np.arange(1, n + 1)
    radius = _cauchy_radius(a)
    # Perturbed circle: an irrational angular offset breaks real-axis symmetry.
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    z = radius * np.exp(1j * angles) * (1 + 0.01 * np.arange(n) / max(n, 1))
    converged = np.zeros(n, dtype=bool)
    abs_a = np.abs(a)
    for _ in range(max_iter):
        pz = np.polynomial.polynomial.polyval(z, a)
        # a root whose residual is at the rounding level cannot be improved
        converged |= np.abs(pz) <= 4 * EPS * np.polynomial.polynomial.polyval(np.abs(z), abs_a)
        if converged.all():
            return z, True
        dpz = np.polynomial.polynomial.polyval(z, da)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        w = np.where(np.isfinite(w), w, 0.0)
        w[converged] = 0.0
        z = z - w
        converged |= np.abs(w) <= tol * (1.0 + np.abs(z))
        converged |= pz == 0
        if converged.all():
            return z, True
    return z, False


def _merge_clusters(z: np.ndarray, a: np.ndarray,
                    radii=(1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2)) -> tuple[np.ndarray, np.ndarray]:
    """Replace each tight cluster of roots by one refined multiple root.

    A root of multiplicity k comes back as k points spread by ``eps^(1/k)``;
    the cluster is refined as the simple root of the (k-1)-th derivative.
    A merge is kept only if the refined point is as good a root as the
    points it replaces, so close but well separated roots are left alone. Radii grow
    geometrically so nested clusters are resolved innermost first.
    Returns the new roots and the spread of the cluster each belongs to.
    """
    z = z.copy()
    spread = np.zeros(len(z))
    polyval = np.polynomial.polynomial.polyval
    for radius in radii:
        label = np.arange(len(z))
        for i in range(len(z)):
            for j in range(i + 1, len(z)):
                if abs(z[i] - z[j]) <= radius * (1.0 + abs(z[i])):
                    label[label == label[j]] = label[i]
        for lab in np.unique(label):
            idx = np.flatnonzero(label == lab)
            if idx.size < 2 or np.all(z[idx] == z[idx[0]]):
                continue
            c = _refine_multiple(a, z[idx].mean(), idx.size, radii[-1] * (1.0 + abs(z[idx[0]])))
            # no worse than the unmerged points, or at roundoff level
            limit = max(10.0 * float(np.max(np.abs(polyval(z[idx], a)))),
                        1e2 * np.finfo(float).eps * float(polyval(abs(c), np.abs(a))))
            if abs(polyval(c, a)) > limit:
                continue
            spread[idx] = np.maximum(spread[idx], np.max(np.abs(z[idx] - c)))
            z[idx] = c
    return z, spread


def _refine_multiple(a: np.ndarray, c: complex, k: int, reach: float) -> complex:
    d = np.polynomial.polynomial.polyder(a, k - 1)
    dd = np.polynomial.polynomial.polyder(d)
    polyval = np.polynomial.polynomial.polyval
    x = c
    for _ in range(8):
        den = polyval(x, dd)
        if den == 0:
            break
        x = x - polyval(x, d) / den
    return x if abs(x - c) <= reach else c


def _symmetrize(z: np.ndarray, a: np.ndarray, snap: float = 1e-10) -> np.ndarray:
    z, spread = _merge_clusters(z, a)
    real_mask = np.abs(z.imag) <= np.maximum(snap * (1.0 + np.abs(z)), spread)
    out = [complex(x.real, 0.0) for x in z[real_mask]]
    rest = list(z[~real_mask])
    upper = [x for x in rest if x.imag > 0]
    lower = [x for x in rest if x.imag < 0]
    if len(upper) != len(lower):
        raise ConjugatePairingFailure(
            f"{len(upper)} upper-half roots vs {len(lower)} lower-half roots"
        )
    for u in sorted(upper, key=lambda c: (c.real, c.imag)):
        j = min(range(len(lower)), key=lambda k: abs(lower[k] - u.conjugate()))
        v = lower.pop(j)
        m = 0.5 * (u + v.conjugate())
        out.extend([m, m.conjugate()])
    return np.array(out, dtype=complex)


def poly_roots(p: RealPoly, tol: float = 1e-12, max_iter: int = 200) -> ComplexRootSet:
    """All complex roots of ``p`` by simultaneous Aberth-Ehrlich iteration.

    Roots at the origin are split off exactly. After convergence each root is
    polished with Newton steps on the original coefficients and the set is made
    closed under conjugation.
    """
    if p.is_zero() or p.degree < 1:
        raise ValueError("poly_roots needs a polynomial of degree >= 1")
    c = p.as_array()
    zeros_at_origin = 0
    while c[0] == 0.0:
        c = c[1:]
        zeros_at_origin += 1
    lead = float(c[-1])
    roots = np.zeros(0, dtype=complex)
    if len(c) > 1:
        a = c / lead
        if len(a) == 2:
            roots = np.array([-a[0] + 0j])
        else:
            roots, ok = _aberth(a, tol, max_iter)
            roots = _newton_polish(a, roots)
            scale = np.max(np.abs(a)) * np.maximum(1.0, np.abs(roots)) ** (len(a) - 1)
            resid = np.abs(np.polynomial.polynomial.polyval(roots, a))
            if not ok and np.any(resid > 1e3 * tol * scale):
                raise NonConvergence(
                    f"Aberth iteration did not converge in {max_iter} iterations "
                    f"(max scaled residual {np.max(resid / scale):.3e})"
                )
            roots = _symmetrize(roots, a)
    roots = np.concatenate([np.zeros(zeros_at_origin, dtype=complex), roots])
    order = np.lexsort((roots.imag, roots.real))
    return ComplexRootSet(tuple(complex(r) for r in roots[order]), lead)


def _newton_polish(a: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    da = a[1:] * np.arange(1, len(a))
    polyval = np.polynomial.polynomial.polyval
    for _ in range(steps):
        pz = polyval(z, a)
        dpz = polyval(z, da)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - pz / dpz
        better = np.isfinite(cand) & (np.abs(polyval(cand, a)) < np.abs(pz))
        z = np.where(better, cand, z)
    return z
