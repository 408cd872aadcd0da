"""Scalar polynomials and rational maps on the extended complex plane.

Coefficients are ascending. Evaluation is projective: poles return complex
infinity, and the point at infinity is evaluated through degrees and leading
coefficients. Derivatives are exact coefficient operations, so Schwarzian
derivatives come out of rational arithmetic followed by point evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import INF, is_inf
from .errors import SingularPointError

_TRIM = 1e-300


class Poly:
    """Polynomial with complex coefficients, ascending order."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = [complex(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [0j]
        self.c = tuple(c)

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for a in reversed(self.c):
            acc = acc * z + a
        return acc

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self) -> complex:
        return self.c[-1]

    def is_zero(self) -> bool:
        return len(self.c) == 1 and self.c[0] == 0

    def deriv(self) -> "Poly":
        if self.degree == 0:
            return Poly([0])
        return Poly([k * a for k, a in enumerate(self.c)][1:])

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, float, complex)):
            return Poly([a * other for a in self.c])
        out = [0j] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __add__(self, other) -> "Poly":
        n = max(len(self.c), len(other.c))
        out = [0j] * n
        for i, a in enumerate(self.c):
            out[i] += a
        for i, b in enumerate(other.c):
            out[i] += b
        return Poly(out)

    def __sub__(self, other) -> "Poly":
        return self + Poly([-b for b in other.c])

    def __neg__(self) -> "Poly":
        return Poly([-a for a in self.c])

    def roots(self) -> np.ndarray:
        if self.degree == 0:
            return np.array([], dtype=complex)
        return np.roots(list(reversed(self.c)))

    def __repr__(self):
        return "Poly(%r)" % (self.c,)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)


def poly_from_roots(roots, lead=1.0) -> Poly:
    c = np.atleast_1d(np.poly(list(roots))) if len(list(roots)) else np.array([1.0])
    return Poly(list(reversed((lead * c).tolist())))


def _cluster(values, tol: float):
    """Group nearly equal complex numbers, returning (representative, count)."""
    out: list[list] = []
    for v in values:
        for grp in out:
            if abs(v - grp[0]) <= tol:
                grp[1] += 1
                grp[0] += (v - grp[0]) / grp[1]
                break
        else:
            out.append([complex(v), 1])
    return [(g[0], g[1]) for g in out]


def root_multiplicity(p: Poly, z0: complex, tol: float = 1e-7) -> int:
    if p.is_zero():
        raise SingularPointError("zero polynomial has no divisor")
    return sum(1 for r in p.roots() if abs(r - z0) <= tol)


@dataclass(frozen=True)
class RationalMap:
    """Quotient of two polynomials, evaluated projectively."""

    num: Poly
    den: Poly

    def __post_init__(self):
        if self.den.is_zero():
            raise SingularPointError("rational map with zero denominator")

    @staticmethod
    def from_coeffs(num, den=(1,)) -> "RationalMap":
        return RationalMap(Poly(num), Poly(den))

    def __call__(self, z) -> complex:
        if is_inf(z):
            dn, dd = self.num.degree, self.den.degree
            if self.num.is_zero():
                return 0j
            if dn > dd:
                return INF
            if dn < dd:
                return 0j
            return self.num.lead / self.den.lead
        z = complex(z)
        d = self.den(z)
        if d == 0:
            n = self.num(z)
            if n == 0:
                raise SingularPointError(
                    "0/0 at z = %r; reduce the map before evaluating" % (z,))
            return INF
        return self.num(z) / d

    def deriv(self) -> "RationalMap":
        n, d = self.num, self.den
        return RationalMap(n.deriv() * d - n * d.deriv(), d * d)

    def __mul__(self, other) -> "RationalMap":
        if isinstance(other, (int, float, complex)):
            return RationalMap(self.num * other, self.den)
        return RationalMap(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalMap":
        return RationalMap(self.num * other.den, self.den * other.num)

    def __add__(self, other) -> "RationalMap":
        return RationalMap(self.num * other.den + other.num * self.den,
                           self.den * other.den)

    def __sub__(self, other) -> "RationalMap":
        return self + (other * (-1))

    def __neg__(self) -> "RationalMap":
        return RationalMap(-self.num, self.den)

    def order_at(self, z0, tol: float = 1e-7) -> int:
        """Vanishing order at z0 (negative at poles), projectively at infinity."""
        if self.num.is_zero():
            raise SingularPointError("zero map has no divisor")
        if is_inf(z0):
            return self.den.degree - self.num.degree
        return (root_multiplicity(self.num, z0, tol)
                - root_multiplicity(self.den, z0, tol))

    def simplified(self, tol: float = 1e-9) -> "RationalMap":
        """Cancel common roots of numerator and denominator numerically.

        Safe for the low-degree catalog data this library manipulates; root
        clusters are matched within tol and the factors rebuilt from roots.
        """
        if self.num.is_zero():
            return RationalMap(Poly([0]), Poly([1]))
        nr = list(self.num.roots())
        dr = list(self.den.roots())
        changed = False
        for r in list(dr):
            hit = None
            for i, s in enumerate(nr):
                if abs(s - r) <= tol * max(1.0, abs(r)):
                    hit = i
                    break
            if hit is not None:
                nr.pop(hit)
                dr.remove(r)
                changed = True
        if not changed:
            return self
        scale = self.num.lead / self.den.lead
        num = poly_from_roots(nr, scale)
        den = poly_from_roots(dr, 1.0)
        return RationalMap(num, den)

    def poles(self, tol: float = 1e-9) -> list[complex]:
        """Finite poles after reduction, with multiplicity collapsed."""
        red = self.simplified(tol)
        return [r for r, _ in _cluster(red.den.roots(), 1e-7)]

    def derivatives(self, count: int) -> list["RationalMap"]:
        out = [self]
        for _ in range(count):
            out.append(out[-1].deriv())
        return out


@dataclass(frozen=True)
class AnalyticMap:
    """Closed-form holomorphic map with supplied derivatives.

    Used for the one catalog entry whose Gauss map is not rational; the
    divisor bookkeeping of RationalMap is replaced by the callbacks.
    """

    name: str
    fn: Callable[[complex], complex]
    d1: Callable[[complex], complex]
    d2: Callable[[complex], complex] | None = None
    d3: Callable[[complex], complex] | None = None
    schwarzian_fn: Callable[[complex], complex] | None = None

    def __call__(self, z) -> complex:
        return self.fn(complex(z))

    def deriv_at(self, z, k: int = 1) -> complex:
        z = complex(z)
        if k == 1:
            return self.d1(z)
        if k == 2 and self.d2 is not None:
            return self.d2(z)
        if k == 3 and self.d3 is not None:
            return self.d3(z)
        raise SingularPointError("derivative order %d not available for %s"
                                 % (k, self.name))


def schwarzian(g, z: complex) -> complex:
    """Schwarzian derivative (g''/g')' - (1/2)(g''/g')^2 at a point.

    g may be a RationalMap (derivatives are exact rational arithmetic) or an
    AnalyticMap carrying its own derivative or Schwarzian callbacks.
    """
    if isinstance(g, AnalyticMap):
        if g.schwarzian_fn is not None:
            return g.schwarzian_fn(complex(z))
        g1, g2, g3 = (g.deriv_at(z, 1), g.deriv_at(z, 2), g.deriv_at(z, 3))
    else:
        d1 = g.deriv()
        d2 = d1.deriv()
        d3 = d2.deriv()
        g1, g2, g3 = d1(z), d2(z), d3(z)
    if g1 == 0 or is_inf(g1):
        raise SingularPointError("Schwarzian undefined where g' vanishes or blows up")
    r = g2 / g1
    return g3 / g1 - 1.5 * r * r
