"""Unitarization of mirror representations and the period-killing solve.

The frame-side mirror matrices rho = F^-1 sigma conj(F o mu) close the
surface exactly when a single constant gauge puts all of them in SU(2).
The gauge is spent in three moves: the basepoint pins the first mirror at
the identity, a real shear diagonalizes the second, and a real diagonal
scaling balances the third. Whatever cannot be absorbed that way is a
genuine period and must be killed by moving in a family of data.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import frobenius, inv2, is_su2, mat, su2_log_axis
from .errors import (BranchError, ConvergenceError, DataError,
                     NoAxisError, NormalizationError)
from .nullcurve import reflection_matrix
from .paths import PolyPath
from .rational import Poly, RationalMap
from .wdata import Reflection, WeierstrassData, sigma_from_normal

__all__ = [
    "ReflectionRep", "CommutantClass", "FamilySpec", "SolveResult",
    "UnitarizeResult", "compute_rep", "mirror_form", "step1_check",
    "step2_diagonalize", "step3_scale", "unitarize", "su2_residual",
    "rho_from_word", "classify_commutant", "is_reducible",
    "synthetic_family", "noid_family", "solve_lambda",
]


@dataclass(frozen=True)
class ReflectionRep:
    """Mirror matrices of one datum at one curvature, keyed by label."""

    data: WeierstrassData
    c: float
    tol: float
    rhos: dict

    def rho(self, label):
        return self.rhos[tuple(label)]

    def gauged(self, a) -> "ReflectionRep":
        """Apply the constant frame change F -> F a to every mirror matrix."""
        ai = inv2(np.asarray(a, dtype=complex))
        new = {k: ai @ v @ np.conj(np.asarray(a)) for k, v in self.rhos.items()}
        return ReflectionRep(self.data, self.c, self.tol, new)


def compute_rep(data: WeierstrassData, c: float, labels=None,
                tol: float = 1e-10) -> ReflectionRep:
    if labels is None:
        labels = [r.label for r in data.reflections]
    rhos = {tuple(l): reflection_matrix(data, l, c, tol=tol) for l in labels}
    return ReflectionRep(data, float(c), tol, rhos)


def mirror_form(rho, tol: float = 1e-7):
    """Decompose a mirror matrix as [[p, i g1], [i g2, conj p]], g real.

    Every matrix with rho conj(rho) = I and det 1 has this shape; the two
    real numbers g1, g2 agree exactly when rho lies in SU(2).
    """
    rho = np.asarray(rho, dtype=complex)
    p = complex(rho[0, 0])
    g1 = complex(rho[0, 1]) / 1j
    g2 = complex(rho[1, 0]) / 1j
    errs = (abs(g1.imag), abs(g2.imag), abs(np.conj(p) - rho[1, 1]))
    if max(errs) > tol:
        raise NormalizationError(
            "matrix is not in mirror normal form (residuals %r); "
            "is the basepoint mirror pinned at the identity?" % (errs,))
    return p, g1.real, g2.real


def su2_residual(rho) -> float:
    """Signed failure of a mirror matrix to lie in SU(2): g2 - g1.

    For a family of data with a degenerating period Per, the residual of the
    second-sheet mirror behaves as 2 c Per + o(c) at small curvature.
    """
    _, g1, g2 = mirror_form(rho)
    return g2 - g1


def step1_check(rep: ReflectionRep, label=(1, 1), tol: float = 1e-7) -> None:
    rho = rep.rho(label)
    err = frobenius(rho - np.eye(2))
    if err > tol:
        raise NormalizationError(
            "basepoint mirror %r is not the identity (residual %.3e); "
            "the basepoint must sit on its fixed curve with real data there"
            % (label, err))


def step2_diagonalize(rho):
    """Real shear u with u^-1 rho conj(u) = diag(xi, conj xi), Im xi > 0.

    Needs |Re p| < 1 and Im p + sqrt(1 - (Re p)^2) > 0. The determinant of
    u is exactly one by the det-1 relation g1 g2 = 1 - |p|^2.
    """
    p, g1, g2 = mirror_form(rho)
    re, im = p.real, p.imag
    if abs(re) >= 1.0:
        raise BranchError("mirror trace %.6f lies outside (-2, 2); no "
                          "unitary diagonalization exists" % (2 * re))
    s = math.sqrt(1.0 - re * re)
    den = im + s
    if den <= 1e-12:
        raise BranchError("mirror eigenvalue sits on the wrong half circle "
                          "(Im p + s = %.3e)" % den)
    a = -g1 / den
    b = g2 / den
    k = math.sqrt(den / (2.0 * s))
    u = k * mat(1.0, a, b, 1.0)
    xi = complex(re, s)
    return u, xi


def step3_scale(rho):
    """Real diagonal d balancing the off-diagonal pair of a mirror matrix.

    For rho = [[p, i b1], [i b2, conj p]] with b1 b2 > 0 this returns
    d = diag(t, 1/t) with t = (b1/b2)^(1/4) and the balanced value
    beta = sqrt(b1 b2), so d^-1 rho conj(d) lies in SU(2).
    """
    p, b1, b2 = mirror_form(rho)
    if b1 * b2 <= 0.0:
        raise NormalizationError(
            "off-diagonal pair has product %.3e <= 0; the matrix is not "
            "unitarizable by a real diagonal gauge" % (b1 * b2))
    t = (b1 / b2) ** 0.25
    d = mat(t, 0.0, 0.0, 1.0 / t)
    return d, math.sqrt(b1 * b2)


@dataclass(frozen=True)
class UnitarizeResult:
    rep: ReflectionRep
    gauge: np.ndarray
    xi: complex
    beta: float | None
    residuals: dict


def unitarize(data: WeierstrassData, c: float, labels=None,
              tol: float = 1e-10, su2_tol: float = 1e-7) -> UnitarizeResult:
    """Run the three gauge moves and verify every mirror lands in SU(2).

    labels order matters: labels[0] must be pinned at the identity by the
    basepoint, labels[1] is diagonalized, labels[2] (when present) is
    balanced. Raises NormalizationError when some mirror stays outside
    SU(2), which signals an unkilled period in the data.
    """
    rep = compute_rep(data, c, labels, tol)
    order = [tuple(l) for l in (labels or [r.label for r in data.reflections])]
    step1_check(rep, order[0], tol=su2_tol)
    u, xi = step2_diagonalize(rep.rho(order[1]))
    rep = rep.gauged(u)
    gauge = u
    beta = None
    if len(order) >= 3:
        d, beta = step3_scale(rep.rho(order[2]))
        rep = rep.gauged(d)
        gauge = gauge @ d
    residuals = {k: frobenius(v @ np.conj(v).T - np.eye(2))
                 for k, v in rep.rhos.items()}
    bad = {k: r for k, r in residuals.items() if r > su2_tol}
    if bad:
        raise NormalizationError(
            "mirrors %s stay outside SU(2) after the gauge moves "
            "(residuals %s); the period is not killed"
            % (sorted(bad), {k: "%.3e" % v for k, v in sorted(bad.items())}))
    return UnitarizeResult(rep, gauge, xi, beta, residuals)


def rho_from_word(rhos, word):
    """Product of mirror matrices with alternating conjugation.

    word is a sequence of labels; entries at even positions enter plainly
    and odd positions enter complex conjugated, matching how an even word
    of mirror maps acts on the frame. The result equals the loop holonomy
    of the corresponding deck transformation up to a global sign.
    """
    if isinstance(rhos, ReflectionRep):
        rhos = rhos.rhos
    out = np.eye(2, dtype=complex)
    for i, label in enumerate(word):
        m = np.asarray(rhos[tuple(label)], dtype=complex)
        out = out @ (m if i % 2 == 0 else np.conj(m))
    return out


class CommutantClass(Enum):
    POINT = "point"
    GEODESIC = "geodesic"
    ALL = "all"


def classify_commutant(mats, tol: float = 1e-9):
    """Fixed-point set of the isometries commuting with a set of SU(2) mats.

    Returns (CommutantClass, axis) where axis is the common rotation axis
    as a unit 3-vector for the geodesic case and None otherwise.
    """
    noncentral = []
    for m in mats:
        m = np.asarray(m, dtype=complex)
        if not is_su2(m, 1e-6):
            raise DataError("commutant classification expects SU(2) matrices")
        if min(frobenius(m - np.eye(2)), frobenius(m + np.eye(2))) > tol:
            noncentral.append(m)
    if not noncentral:
        return CommutantClass.ALL, None
    base = noncentral[0]
    for m in noncentral[1:]:
        if frobenius(base @ m - m @ base) > tol:
            return CommutantClass.POINT, None
    try:
        T = su2_log_axis(base)
    except NoAxisError:  # pragma: no cover - filtered above
        return CommutantClass.ALL, None
    n1 = float(np.imag(T[0, 1]))
    n2 = float(np.real(T[0, 1]))
    n3 = float(np.imag(T[0, 0]))
    v = np.array([n1, n2, n3])
    return CommutantClass.GEODESIC, v / np.linalg.norm(v)


def is_reducible(mats, tol: float = 1e-9) -> bool:
    """True when the matrices share an eigenline (equivalently, the group
    they generate fixes more than a point in the three-space)."""
    cls, _ = classify_commutant(mats, tol)
    return cls is not CommutantClass.POINT


# ---------------------------------------------------------------------------
# families and the solve


@dataclass(frozen=True)
class FamilySpec:
    """Family of data with 0 or 1 period parameters.

    data(lam) builds the datum; label names the second-sheet mirror whose
    residual is the period condition, or None when the symmetry leaves no
    period to kill (dim 0); per(lam), when known in closed form, is the
    Euclidean period used to seed the solve slope.
    """

    name: str
    data: object
    label: tuple | None
    per: object = None
    lam_bounds: tuple = (-4.0, 4.0)
    description: str = ""

    @property
    def dim(self) -> int:
        return 0 if self.label is None else 1


def synthetic_family() -> FamilySpec:
    """Two-ended datum with an exactly linear period: Per(lam) = lam.

    G = z and q = (1 + (2/pi) lam z) / (z^2 - 1)^2 on the twice-punctured
    sphere. The mirror is z -> conj z with sheets through 0 and 2; the
    residual of the far sheet behaves as 2 c lam + o(c).
    """
    a = 2.0 / math.pi
    up = PolyPath((0.0, 0.5 + 0.8j, 1.5 + 0.8j, 2.0))

    def build(lam: float) -> WeierstrassData:
        G = RationalMap.from_coeffs([0, 1])
        q = RationalMap(Poly([1.0, a * float(lam)]), Poly([1, 0, -2, 0, 1]))
        refl = (
            Reflection((1, 1), np.eye(2), sigma_from_normal((0, 1, 0)),
                       normal=(0, 1, 0), anchor=0.0),
            Reflection((1, 2), np.eye(2), sigma_from_normal((0, 1, 0)),
                       normal=(0, 1, 0), anchor=2.0, anchor_path=up),
        )
        loops = {"per": PolyPath((0.0, 0.5 + 0.8j, 1.5 + 0.8j, 2.0,
                                  1.5 - 0.8j, 0.5 - 0.8j, 0.0), closed=True)}
        return WeierstrassData("synthetic", G, q, (-1.0, 1.0), refl, loops,
                               0.0, params={"family_lambda": float(lam)})

    return FamilySpec("synthetic", build, (1, 2), per=lambda lam: float(lam),
                      lam_bounds=(-3.0, 3.0),
                      description="two-ended mirror datum, Per(lam) = lam")


def noid_family(n: int = 3) -> FamilySpec:
    """Symmetric n-ended datum; the symmetry kills every period, dim 0."""
    from .wdata import catalog

    def build(lam=()) -> WeierstrassData:
        if lam not in ((), None, 0, 0.0):
            raise DataError("the symmetric noid family has no period "
                            "parameters; got lam = %r" % (lam,))
        return catalog("noid(%d)" % n)

    return FamilySpec("noid(%d)" % n, build, None,
                      description="symmetric noid; no period parameters")


@dataclass(frozen=True)
class SolveResult:
    lam: float | tuple
    residual: float
    iterations: int
    c: float
    history: tuple


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CMCFORGE_THREADS", "1")))
    except ValueError:
        return 1


def solve_lambda(family: FamilySpec, c: float, lam0: float = 0.0,
                 residual_tol: float = 1e-11, tol: float = 1e-11,
                 max_iter: int = 40, threads: int | None = None) -> SolveResult:
    """Secant solve of su2_residual(lam; c) = 0 along a family of data.

    The first bracket is seeded from the closed-form period slope when the
    family provides one (residual ~ 2 c Per(lam)); otherwise a small probe
    step is used. Raises ConvergenceError when the residual cannot be
    driven below residual_tol within max_iter evaluations.
    """
    c = float(c)
    if c == 0.0:
        raise BranchError("the period condition degenerates at c = 0")
    if family.label is None:
        # no period parameters: membership is decided by the gauge moves
        res = unitarize(family.data(()), c)
        return SolveResult((), max(res.residuals.values()), 0, c, ())
    if threads is None:
        threads = _thread_count()

    def residual(lam: float) -> float:
        data = family.data(lam)
        rho = reflection_matrix(data, family.label, c, tol=tol)
        return su2_residual(rho)

    lam_a = float(lam0)
    lam_b = lam_a + 0.25
    history = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, 2)) as ex:
            fa, fb = ex.map(residual, (lam_a, lam_b))
    else:
        fa, fb = residual(lam_a), residual(lam_b)
    history.extend([(lam_a, fa), (lam_b, fb)])
    if family.per is not None:
        # closed-form slope: d residual / d lam ~ 2 c dPer/dlam
        dper = (family.per(lam_a + 0.5) - family.per(lam_a - 0.5))
        slope = 2.0 * c * dper
        if slope != 0.0:
            lam_b, fb = lam_a - fa / slope, None
            fb = residual(lam_b)
            history.append((lam_b, fb))

    it = len(history)
    lo, hi = family.lam_bounds
    while it < max_iter:
        if abs(fb) <= residual_tol:
            return SolveResult(lam_b, fb, it, c, tuple(history))
        if fb == fa:
            raise ConvergenceError("flat residual; the family does not move "
                                   "the period at lam = %.6f" % lam_b)
        lam_next = lam_b - fb * (lam_b - lam_a) / (fb - fa)
        lam_next = min(max(lam_next, lo), hi)
        lam_a, fa = lam_b, fb
        lam_b = lam_next
        fb = residual(lam_b)
        history.append((lam_b, fb))
        it += 1
    if abs(fb) <= residual_tol:
        return SolveResult(lam_b, fb, it, c, tuple(history))
    raise ConvergenceError(
        "period solve stalled at residual %.3e after %d evaluations"
        % (fb, it))
