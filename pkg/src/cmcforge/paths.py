"""Polyline paths in the plane and contour integration along them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .algebra import is_inf, mobius_apply
from .errors import PathError


@dataclass(frozen=True)
class PolyPath:
    """Piecewise linear path given by its waypoints."""

    waypoints: tuple
    closed: bool = False

    def __post_init__(self):
        pts = tuple(complex(w) for w in self.waypoints)
        if len(pts) < 2:
            raise PathError("path needs at least two waypoints")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise PathError("consecutive waypoints coincide at %r" % (a,))
        if self.closed and pts[0] != pts[-1]:
            raise PathError("closed path must end at its start")
        object.__setattr__(self, "waypoints", pts)

    @property
    def start(self) -> complex:
        return self.waypoints[0]

    @property
    def end(self) -> complex:
        return self.waypoints[-1]

    def segments(self):
        return list(zip(self.waypoints, self.waypoints[1:]))

    def length(self) -> float:
        return sum(abs(b - a) for a, b in self.segments())

    def reversed(self) -> "PolyPath":
        return PolyPath(tuple(reversed(self.waypoints)), self.closed)

    def reflected(self, mobius_mat) -> "PolyPath":
        """Image under the anti-holomorphic map z -> m(conj z)."""
        img = tuple(mobius_apply(mobius_mat, np.conj(w)) for w in self.waypoints)
        if any(is_inf(w) for w in img):
            raise PathError("reflected path passes through infinity")
        return PolyPath(img, self.closed)

    def concat(self, other: "PolyPath") -> "PolyPath":
        if self.end != other.start:
            raise PathError("paths do not chain")
        return PolyPath(self.waypoints + other.waypoints[1:])

    def min_distance_to(self, point: complex) -> float:
        best = float("inf")
        p = complex(point)
        for a, b in self.segments():
            d = b - a
            t = ((p - a).real * d.real + (p - a).imag * d.imag) / (abs(d) ** 2)
            t = min(1.0, max(0.0, t))
            best = min(best, abs(a + t * d - p))
        return best


def circle_path(center: complex, radius: float, n: int = 12,
                start_angle: float = 0.0) -> PolyPath:
    """Counterclockwise closed polygon approximating a circle."""
    ang = start_angle + 2.0 * np.pi * np.arange(n + 1) / n
    pts = center + radius * np.exp(1j * ang)
    pts[-1] = pts[0]
    return PolyPath(tuple(pts), closed=True)


def loop_around(basepoint: complex, center: complex, radius: float,
                n: int = 12) -> PolyPath:
    """Closed loop based at basepoint winding once ccw around center."""
    u = (basepoint - center) / abs(basepoint - center)
    entry = center + radius * u
    ring = circle_path(center, radius, n, start_angle=np.angle(u))
    pts = (complex(basepoint),) + ring.waypoints + (complex(basepoint),)
    # drop duplicate entry point if basepoint already sits on the ring
    out = [pts[0]]
    for w in pts[1:]:
        if w != out[-1]:
            out.append(w)
    return PolyPath(tuple(out), closed=True)


def clearance_scale(singular_points) -> dict:
    """Per-singularity local scale: distance to the nearest other singularity.

    Scales are clamped to [1e-3, 1]; a path must keep 0.05 of this scale away
    from each singular point.
    """
    pts = [complex(s) for s in singular_points if not is_inf(s)]
    scales = {}
    for i, s in enumerate(pts):
        others = [abs(s - t) for j, t in enumerate(pts) if j != i]
        loc = min(others) if others else 1.0
        scales[s] = min(1.0, max(1e-3, loc))
    return scales


def check_clearance(path: PolyPath, singular_points, factor: float = 0.05) -> None:
    for s, scale in clearance_scale(singular_points).items():
        d = path.min_distance_to(s)
        if d < factor * scale:
            raise PathError(
                "path comes within %.3g of singular point %r (need %.3g)"
                % (d, s, factor * scale))


def contour_integral(fn, path: PolyPath, epsabs: float = 1e-11,
                     components: int = 1) -> np.ndarray:
    """Integrate a complex vector-valued fn(z) dz along the path.

    Adaptive Gauss-Kronrod per segment and per component; fn returns a
    scalar when components == 1, else a length-components sequence.
    """
    total = np.zeros(components, dtype=complex)
    for a, b in path.segments():
        d = b - a
        if components == 1:
            val, _ = quad(lambda t: fn(a + t * d) * d, 0.0, 1.0,
                          epsabs=epsabs, epsrel=epsabs, limit=200,
                          complex_func=True)
            total[0] += val
        else:
            for k in range(components):
                val, _ = quad(lambda t, k=k: fn(a + t * d)[k] * d, 0.0, 1.0,
                              epsabs=epsabs, epsrel=epsabs, limit=200,
                              complex_func=True)
                total[k] += val
    return total if components > 1 else total[0]
