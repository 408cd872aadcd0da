"""Integration of the moving frame dF = c alpha F along chart paths.

The frame F lives in SL(2, C); alpha is the traceless connection form built
from the Weierstrass datum. At c = 0 the frame stays at its initial value,
which is the degenerate limit the deformation theory expands around.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import INF, frobenius, inv2, mat
from .errors import AccuracyError, ConvergenceError, PathError
from .paths import PolyPath, check_clearance
from .wdata import WeierstrassData

__all__ = [
    "NullCurveSolution", "GaussJet", "integrate", "monodromy",
    "monodromy_c_derivative", "reflection_matrix", "secondary_gauss",
    "hyperbolic_gauss", "secondary_schwarzian", "dualize", "deform_in_c",
]

# Dormand-Prince 5(4) pairs; E is the difference of the two weight rows.
_A = (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = _A[5]
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
_MAX_STEPS = 200_000


@dataclass(frozen=True)
class NullCurveSolution:
    """End frame of one integration run plus step statistics."""

    F: np.ndarray
    c: float
    path: PolyPath
    tol: float
    steps: int
    rejected: int
    dual: bool = False


def _rhs(entries, c, z):
    a, b, d = entries.eval(z)
    return c * a, c * b, c * d


def _integrate_segment(entries, c, za, zb, f, tol_per_len, stats):
    """Advance the four frame components from za to zb along the segment."""
    seg = zb - za
    L = abs(seg)
    if L == 0.0:
        return f
    direction = seg / L
    f11, f12, f21, f22 = f
    s = 0.0
    h = min(L, max(L / 20.0, 1e-6))
    steps, rejected = stats

    def deriv(sv, y):
        z = za + direction * sv
        a, b, d = entries.eval(z)
        a *= c
        b *= c
        d *= c
        y11, y12, y21, y22 = y
        return ((a * y11 + b * y21) * direction,
                (a * y12 + b * y22) * direction,
                (d * y11 - a * y21) * direction,
                (d * y12 - a * y22) * direction)

    k1 = deriv(0.0, (f11, f12, f21, f22))
    while s < L:
        if steps + rejected > _MAX_STEPS:
            raise ConvergenceError("step limit exceeded on a path segment")
        h = min(h, L - s)
        y = (f11, f12, f21, f22)
        ks = [k1]
        cnodes = (0.2, 0.3, 0.8, 8 / 9, 1.0)
        for i, row in enumerate(_A[:5]):
            yi = list(y)
            for j, aij in enumerate(row):
                if aij != 0.0:
                    kj = ks[j]
                    w = h * aij
                    yi[0] += w * kj[0]
                    yi[1] += w * kj[1]
                    yi[2] += w * kj[2]
                    yi[3] += w * kj[3]
            ks.append(deriv(s + cnodes[i] * h, tuple(yi)))
        ynew = list(y)
        for j, bj in enumerate(_B):
            if bj != 0.0:
                kj = ks[j]
                w = h * bj
                ynew[0] += w * kj[0]
                ynew[1] += w * kj[1]
                ynew[2] += w * kj[2]
                ynew[3] += w * kj[3]
        k7 = deriv(s + h, tuple(ynew))
        ks.append(k7)
        e = [0j, 0j, 0j, 0j]
        for j, ej in enumerate(_E):
            if ej != 0.0:
                kj = ks[j]
                w = h * ej
                e[0] += w * kj[0]
                e[1] += w * kj[1]
                e[2] += w * kj[2]
                e[3] += w * kj[3]
        # right-invariant error: || dF F^-1 || with F^-1 = adj(F) for det 1
        det = ynew[0] * ynew[3] - ynew[1] * ynew[2]
        g11 = e[0] * ynew[3] - e[1] * ynew[2]
        g12 = -e[0] * ynew[1] + e[1] * ynew[0]
        g21 = e[2] * ynew[3] - e[3] * ynew[2]
        g22 = -e[2] * ynew[1] + e[3] * ynew[0]
        scale = max(1e-300, abs(det))
        err = math.sqrt(abs(g11) ** 2 + abs(g12) ** 2
                        + abs(g21) ** 2 + abs(g22) ** 2) / scale
        budget = tol_per_len * h
        if err <= budget or h <= 1e-13 * max(1.0, L):
            s += h
            f11, f12, f21, f22 = ynew
            # renormalize the determinant drift
            rs = 1.0 / cmath.sqrt(det)
            f11 *= rs
            f12 *= rs
            f21 *= rs
            f22 *= rs
            k1 = k7
            steps += 1
            grow = 5.0 if err == 0.0 else min(
                5.0, max(0.2, 0.9 * (budget / err) ** 0.2))
            h *= grow
        else:
            rejected += 1
            h *= max(0.2, 0.9 * (budget / err) ** 0.2)
            k1 = deriv(s, (f11, f12, f21, f22))
    stats[0], stats[1] = steps, rejected
    return (f11, f12, f21, f22)


def integrate(data: WeierstrassData, path, c: float, tol: float = 1e-10,
              F0=None, clearance: bool = True) -> NullCurveSolution:
    """Integrate the frame along a path; returns the end frame.

    tol controls the accumulated local error per unit path length, measured
    in the right-invariant norm, so closed loops of different sizes get
    comparable accuracy.
    """
    if not isinstance(path, PolyPath):
        path = PolyPath(tuple(path))
    if clearance:
        check_clearance(path, data.singular_points())
    entries = data.alpha
    if F0 is None:
        f = (1 + 0j, 0j, 0j, 1 + 0j)
    else:
        F0 = np.asarray(F0, dtype=complex)
        f = (complex(F0[0, 0]), complex(F0[0, 1]),
             complex(F0[1, 0]), complex(F0[1, 1]))
    c = float(c)
    total = path.length()
    stats = [0, 0]
    if c != 0.0 and total > 0.0:
        tol_per_len = tol / total
        for za, zb in path.segments():
            f = _integrate_segment(entries, c, za, zb, f, tol_per_len, stats)
    F = mat(*f)
    return NullCurveSolution(F, c, path, tol, stats[0], stats[1])


def monodromy(data: WeierstrassData, loop, c: float, tol: float = 1e-10,
              F0=None) -> np.ndarray:
    """Frame holonomy around a named (or explicit) closed loop."""
    path = data.loop(loop) if not isinstance(loop, PolyPath) else loop
    if not path.closed:
        raise PathError("monodromy needs a closed loop")
    return integrate(data, path, c, tol, F0=F0).F


def monodromy_c_derivative(data: WeierstrassData, loop,
                           epsabs: float = 1e-11) -> np.ndarray:
    """d/dc of the holonomy at c = 0, i.e. the plain loop integral of alpha."""
    from .paths import contour_integral
    path = data.loop(loop) if not isinstance(loop, PolyPath) else loop
    if not path.closed:
        raise PathError("monodromy needs a closed loop")
    a, b, d = contour_integral(lambda z: data.alpha.eval(z), path,
                               epsabs=epsabs, components=3)
    return mat(a, b, d, -a)


def _reflected_frame_path(data: WeierstrassData, refl, probe_path: PolyPath):
    """Path from the basepoint to mu(z) through a fixed point of the mirror."""
    mobius = refl.mobius
    if refl.anchor_path is None:
        head: tuple = (data.basepoint,)
    else:
        back = refl.anchor_path.reversed().reflected(mobius)
        head = refl.anchor_path.waypoints + back.waypoints[1:]
    tail = probe_path.reflected(mobius)
    if abs(head[-1] - tail.waypoints[0]) > 1e-12:
        raise PathError("mirror image of the basepoint does not match the "
                        "anchor detour; check the anchor data")
    return PolyPath(head + tail.waypoints[1:])


def _default_probes(data: WeierstrassData):
    z0 = data.basepoint
    sing = data.singular_points()
    r = 0.3
    if sing:
        r = min(r, 0.5 * min(abs(z0 - s) for s in sing))
    return (z0 + r * cmath.exp(0.9j), z0 + r * cmath.exp(2.3j))


def reflection_matrix(data: WeierstrassData, label, c: float,
                      tol: float = 1e-10, probes=None) -> np.ndarray:
    """Frame-side matrix of one mirror: rho = F(z)^-1 sigma conj(F(mu z)).

    The result must not depend on the probe point z; it is evaluated at two
    probes and cross-checked, with one retry at tol/10 before giving up.
    """
    refl = data.reflection(label)
    if probes is None:
        probes = _default_probes(data)
    z0 = data.basepoint

    def eval_at(z, t):
        fwd = PolyPath((z0, complex(z)))
        sol = integrate(data, fwd, c, t)
        mirrored = _reflected_frame_path(data, refl, fwd)
        sol_m = integrate(data, mirrored, c, t)
        return inv2(sol.F) @ refl.sigma @ np.conj(sol_m.F)

    for attempt_tol in (tol, tol / 10.0):
        mats = [eval_at(z, attempt_tol) for z in probes]
        spread = max(frobenius(mats[0] - m) for m in mats[1:]) if len(mats) > 1 else 0.0
        norm = max(1.0, frobenius(mats[0]))
        if spread <= 200.0 * attempt_tol * norm:
            rho = mats[0]
            closure = rho @ np.conj(rho)
            if frobenius(closure - np.eye(2)) > 1e-6 * norm ** 2:
                raise AccuracyError(
                    "mirror matrix fails rho conj(rho) = I; got residual %.3e"
                    % frobenius(closure - np.eye(2)))
            return rho
    raise AccuracyError(
        "mirror matrix varies with the probe point (spread %.3e); the paths "
        "are either non-homotopic or under-resolved" % spread)


@dataclass(frozen=True)
class GaussJet:
    """Secondary Gauss map value, derivative, and Hopf density at a point."""

    z: complex
    g: complex
    g_prime: complex
    omega: complex
    M: np.ndarray

    def dsigma(self, q_value) -> float:
        """Spherical density of g, in the pole-safe form
        4 |q|^2 |M21|^2 / (|M11|^2 + |M21|^2)^2."""
        m11, m21 = complex(self.M[0, 0]), complex(self.M[1, 0])
        top = 4.0 * abs(q_value) ** 2 * abs(m21) ** 2
        bot = (abs(m11) ** 2 + abs(m21) ** 2) ** 2
        return top / bot


def secondary_gauss(data: WeierstrassData, z, c: float, tol: float = 1e-10,
                    F=None) -> GaussJet:
    """Jet of the untwisted Gauss map at z from the conjugated connection.

    M = F^-1 alpha F is rank one and traceless; its column ratio gives g,
    its lower-left entry the density of omega, and g' = q / M21 exactly.
    """
    z = complex(z)
    if F is None:
        F = integrate(data, PolyPath((data.basepoint, z)), c, tol).F
    M = inv2(F) @ data.alpha.matrix(z) @ F
    m11, m21 = complex(M[0, 0]), complex(M[1, 0])
    if abs(m21) <= 1e-14 * max(1.0, abs(m11)):
        g = INF
        gp = INF
    else:
        g = m11 / m21
        gp = complex(data.q(z)) / m21
    return GaussJet(z, g, gp, m21, M)


def hyperbolic_gauss(data: WeierstrassData, z, c: float, tol: float = 1e-10,
                     F=None) -> complex:
    """Ratio dF11/dF21 recovered from the integrated frame at z."""
    z = complex(z)
    if F is None:
        F = integrate(data, PolyPath((data.basepoint, z)), c, tol).F
    D = data.alpha.matrix(z) @ F
    d11, d21 = complex(D[0, 0]), complex(D[1, 0])
    if abs(d21) <= 1e-14 * max(1.0, abs(d11)):
        return INF
    return d11 / d21


def secondary_schwarzian(data: WeierstrassData, z, c: float,
                         tol: float = 1e-10, F=None) -> complex:
    """Schwarzian derivative of the untwisted Gauss map at z.

    Uses the exact jet of M = F^-1 alpha F: M' = F^-1 alpha' F and
    M'' = F^-1 (alpha'' + c [alpha', alpha]) F, so no finite differencing
    of the frame is involved. With w = g' = q / M21,
    S(g) = w''/w - (3/2) (w'/w)^2.
    """
    z = complex(z)
    if F is None:
        F = integrate(data, PolyPath((data.basepoint, z)), c, tol).F
    Fi = inv2(F)
    A = data.alpha.matrix(z)
    A1 = data.alpha.deriv_matrix(z, 1)
    A2 = data.alpha.deriv_matrix(z, 2)
    M = Fi @ A @ F
    M1 = Fi @ A1 @ F
    M2 = Fi @ (A2 + c * (A1 @ A - A @ A1)) @ F
    m, mp, mpp = complex(M[1, 0]), complex(M1[1, 0]), complex(M2[1, 0])
    if abs(m) < 1e-13:
        raise AccuracyError("secondary Gauss map has a pole at the sample")
    q0 = complex(data.q(z))
    q1 = complex(data.q.deriv()(z)) if hasattr(data.q, "deriv") else 0j
    q2 = complex(data.q.deriv().deriv()(z)) if hasattr(data.q, "deriv") else 0j
    w = q0 / m
    wp = (q1 * m - q0 * mp) / (m * m)
    wpp = (q2 * m * m - q0 * mpp * m - 2 * q1 * mp * m
           + 2 * q0 * mp * mp) / (m * m * m)
    return wpp / w - 1.5 * (wp / w) ** 2


def dualize(sol: NullCurveSolution) -> NullCurveSolution:
    """Inverse frame; its connection is -F^-1 alpha F, which swaps the roles
    of the two Gauss maps."""
    return NullCurveSolution(inv2(sol.F), sol.c, sol.path, sol.tol,
                             sol.steps, sol.rejected, dual=not sol.dual)


def deform_in_c(data: WeierstrassData, loop, c_values, tol: float = 1e-10):
    """Holonomy traces along a family of curvature parameters."""
    out = []
    for c in c_values:
        M = monodromy(data, loop, float(c), tol)
        out.append(complex(M[0, 0] + M[1, 1]))
    return np.asarray(out, dtype=complex)
