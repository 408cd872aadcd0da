"""Complex 2x2 matrix algebra and the Hermitian matrix model of hyperbolic 3-space.

Points of the hyperbolic space of curvature -c^2 are positive Hermitian
matrices X with det X = 1/c^2; the group SL(2,C) acts by X -> a X a*.
Matrices are numpy arrays of shape (2, 2) and dtype complex.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrixError, NoAxisError, WrongSheetError

DEFAULT_TOL = 1e-9

# Extended complex plane: the point at infinity is carried as complex
# infinity and tested with is_inf, never approximated by a large float.
INF = complex(math.inf, 0.0)

IDENTITY = np.eye(2, dtype=complex)


def mat(a11, a12, a21, a22) -> np.ndarray:
    return np.array([[a11, a12], [a21, a22]], dtype=complex)


def is_inf(z) -> bool:
    z = complex(z)
    return math.isinf(z.real) or math.isinf(z.imag)


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=complex)))


def det2(a) -> complex:
    a = np.asarray(a, dtype=complex)
    return complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])


def adj2(a) -> np.ndarray:
    """Adjugate; equals the inverse for det 1 matrices."""
    a = np.asarray(a, dtype=complex)
    return mat(a[1, 1], -a[0, 1], -a[1, 0], a[0, 0])


def inv2(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    d = det2(a)
    if d == 0:
        raise InvalidMatrixError("matrix is singular")
    return adj2(a) / d


def delta(a) -> complex:
    """Antisymmetric part probe a12 - a21, used by the period linearization."""
    a = np.asarray(a, dtype=complex)
    return complex(a[0, 1] - a[1, 0])


def is_sl2c(a, tol: float = DEFAULT_TOL) -> bool:
    return abs(det2(a) - 1.0) <= tol


def is_su2(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=complex)
    if not is_sl2c(a, tol):
        return False
    return frobenius(a @ a.conj().T - IDENTITY) <= tol


def is_sl2r(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=complex)
    if not is_sl2c(a, tol):
        return False
    return float(np.max(np.abs(a.imag))) <= tol


def is_hermitian_positive(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=complex)
    if frobenius(a - a.conj().T) > tol:
        return False
    tr = a[0, 0].real + a[1, 1].real
    return det2(a).real > 0 and tr > 0


def mobius_apply(a, z, tol: float = DEFAULT_TOL) -> complex:
    """Apply the fractional linear map of a in SL(2,C) to an extended-complex z."""
    a = np.asarray(a, dtype=complex)
    if not is_sl2c(a, tol):
        raise InvalidMatrixError("mobius_apply needs det = 1, got det = %r" % det2(a))
    if is_inf(z):
        if a[1, 0] == 0:
            return INF
        return complex(a[0, 0] / a[1, 0])
    z = complex(z)
    den = a[1, 0] * z + a[1, 1]
    if den == 0:
        return INF
    return complex((a[0, 0] * z + a[0, 1]) / den)


@dataclass(frozen=True)
class HermitianPoint:
    """Point of hyperbolic 3-space of curvature -c^2 as a Hermitian matrix."""

    X: np.ndarray
    c: float

    def __post_init__(self):
        object.__setattr__(self, "X", np.asarray(self.X, dtype=complex))

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        if self.c == 0:
            raise InvalidMatrixError("curvature parameter c must be nonzero")
        X = self.X
        if frobenius(X - X.conj().T) > tol * max(1.0, frobenius(X)):
            raise InvalidMatrixError("point matrix is not Hermitian")
        target = 1.0 / self.c**2
        d = det2(X).real
        if abs(d - target) > tol * abs(target):
            raise InvalidMatrixError(
                "det %r does not match 1/c^2 = %r" % (d, target))
        if (X[0, 0].real + X[1, 1].real) <= 0:
            raise WrongSheetError("point lies on the trace <= 0 sheet")

    def minkowski(self) -> tuple[float, float, float, float]:
        X = self.X
        x0 = 0.5 * (X[0, 0].real + X[1, 1].real)
        x3 = 0.5 * (X[0, 0].real - X[1, 1].real)
        x1 = X[0, 1].real
        x2 = X[0, 1].imag
        return (x0, x1, x2, x3)


def act_on_point(a, p: HermitianPoint, tol: float = DEFAULT_TOL) -> HermitianPoint:
    """Isometric action X -> a X a*."""
    a = np.asarray(a, dtype=complex)
    if not is_sl2c(a, tol):
        raise InvalidMatrixError("action requires a in SL(2,C)")
    return HermitianPoint(a @ p.X @ a.conj().T, p.c)


@dataclass(frozen=True)
class BallPoint:
    """Poincare ball coordinates; the ball has radius 1/|c|."""

    y: np.ndarray
    c: float

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))

    @property
    def radius(self) -> float:
        return 1.0 / abs(self.c)


def to_ball(p: HermitianPoint) -> BallPoint:
    x0, x1, x2, x3 = p.minkowski()
    if x0 <= 0:
        raise WrongSheetError("hyperboloid coordinate x0 <= 0")
    ac = abs(p.c)
    xi0 = ac * x0
    y = np.array([x1, x2, x3], dtype=float) / (1.0 + xi0)
    return BallPoint(y, p.c)


def from_ball(b: BallPoint) -> HermitianPoint:
    u = abs(b.c) * np.asarray(b.y, dtype=float)
    uu = float(u @ u)
    if uu >= 1.0:
        raise WrongSheetError("ball point outside radius 1/|c|")
    s = 1.0 / (1.0 - uu)
    xi0 = (1.0 + uu) * s
    v = 2.0 * s * u
    x0 = xi0 / abs(b.c)
    x1, x2, x3 = (v / abs(b.c)).tolist()
    X = mat(x0 + x3, x1 + 1j * x2, x1 - 1j * x2, x0 - x3)
    return HermitianPoint(X, b.c)


def hyperbolic_distance(p: HermitianPoint, q: HermitianPoint) -> float:
    """Distance in the curvature -c^2 metric.

    For det X = det Y = 1/c^2 on the positive sheet,
    cosh(|c| d) = (c^2/2) trace(X adj(Y)), and the adjugate avoids forming
    an explicit inverse.
    """
    if p.c != q.c:
        raise InvalidMatrixError("points live in different curvature models")
    t = (p.c**2) * 0.5 * np.trace(p.X @ adj2(q.X)).real
    return math.acosh(max(t, 1.0)) / abs(p.c)


def su2_log_axis(b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Logarithm of b in SU(2) minus its rotation-free part.

    Returns the traceless anti-Hermitian T with exp(T) = b and eigenvalues
    +-(i theta), theta in (0, pi). Central elements +-I carry no axis.
    """
    b = np.asarray(b, dtype=complex)
    if not is_su2(b, tol):
        raise InvalidMatrixError("su2_log_axis requires b in SU(2)")
    tr = 0.5 * np.trace(b).real
    if abs(abs(tr) - 1.0) <= tol:
        raise NoAxisError("central element of SU(2) has no rotation axis")
    theta = math.acos(max(-1.0, min(1.0, tr)))
    unit = (b - math.cos(theta) * IDENTITY) / math.sin(theta)
    return theta * unit


def random_su2(rng) -> np.ndarray:
    """Haar-ish random SU(2) element from a numpy Generator."""
    v = rng.normal(size=4)
    v = v / np.linalg.norm(v)
    a = v[0] + 1j * v[1]
    b = v[2] + 1j * v[3]
    return mat(a, -np.conj(b), b, np.conj(a))
