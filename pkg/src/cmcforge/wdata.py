"""Weierstrass data for surfaces: Gauss map, Hopf density, mirrors, loops.

A datum is a pair (G, Q = q dz^2) on a punctured sphere chart together with
the anti-holomorphic mirror symmetries of the surface, a basepoint on the
first mirror curve, and named homotopy representatives for period loops.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import INF, is_inf, is_su2, mat, mobius_apply
from .errors import CatalogError, DataError, SingularPointError
from .paths import PolyPath, contour_integral, loop_around
from .rational import AnalyticMap, Poly, RationalMap, schwarzian

__all__ = [
    "Reflection", "WeierstrassData", "AlphaEntries", "RegularityReport",
    "sigma_from_normal", "check_regular", "metric_dsG", "metric_dsigma",
    "euclid_period", "minimal_immerse", "su2_equivalent", "catalog",
    "catalog_names", "data_to_json", "data_from_json", "schwarzian",
]


def sigma_from_normal(nu) -> np.ndarray:
    """SU(2) representative of the reflection in the plane with unit normal nu.

    The plane passes through the model origin; the matrix acts on the Gauss
    map side, with sigma^-1 = [[n2+i n1, -i n3], [-i n3, n2-i n1]].
    """
    n1, n2, n3 = (float(x) for x in nu)
    if abs(n1 * n1 + n2 * n2 + n3 * n3 - 1.0) > 1e-9:
        raise DataError("plane normal must be a unit vector")
    return mat(n2 - 1j * n1, 1j * n3, 1j * n3, n2 + 1j * n1)


@dataclass(frozen=True)
class Reflection:
    """Mirror symmetry z -> m(conj z) of the chart, with its plane data.

    label is (j, k): plane family j, sheet k; k = 1 is the curve through the
    basepoint side. The anchor is a fixed point of the map, reached from the
    basepoint by anchor_path (omitted when the basepoint itself is fixed).
    """

    label: tuple
    mobius: np.ndarray
    sigma: np.ndarray
    normal: tuple | None = None
    anchor: complex | None = None
    anchor_path: PolyPath | None = None

    def __post_init__(self):
        m = np.asarray(self.mobius, dtype=complex)
        s = np.asarray(self.sigma, dtype=complex)
        object.__setattr__(self, "mobius", m)
        object.__setattr__(self, "sigma", s)
        # projective involution: m conj(m) = +-identity
        prod = m @ np.conj(m)
        if not (np.allclose(prod, np.eye(2), atol=1e-12)
                or np.allclose(prod, -np.eye(2), atol=1e-12)):
            raise DataError("mobius part of a mirror must satisfy m conj(m) = +-I")
        if not is_su2(s, 1e-9):
            raise DataError("sigma must lie in SU(2)")

    def apply(self, z) -> complex:
        return mobius_apply(self.mobius, np.conj(complex(z)))

    def deriv(self, z) -> complex:
        """d/d(conj z) of m at conj z; for det-1 m this is 1/(m21 w + m22)^2."""
        w = np.conj(complex(z))
        den = self.mobius[1, 0] * w + self.mobius[1, 1]
        return complex(1.0 / (den * den))


class AlphaEntries:
    """The three independent entries of the connection form.

    alpha = [[G, -G^2], [1, -G]] (q / G') dz has entries
    e11 = G w, e12 = -G^2 w, e21 = w with w = q/G'; e22 = -e11.
    Built once per datum with pole cancellations performed symbolically,
    so evaluation near poles of G stays finite.
    """

    def __init__(self, eval_fns, deriv1_fns, deriv2_fns, singular):
        self._e = eval_fns
        self._d1 = deriv1_fns
        self._d2 = deriv2_fns
        self.singular_points = tuple(singular)

    @staticmethod
    def from_rational(G: RationalMap, q: RationalMap) -> "AlphaEntries":
        gn, gd = G.num, G.den
        p = gn.deriv() * gd - gn * gd.deriv()
        if p.is_zero():
            raise DataError("constant Gauss map has no connection form")
        qn, qd = q.num, q.den
        e21 = RationalMap(qn * gd * gd, qd * p).simplified()
        e11 = RationalMap(gn * qn * gd, qd * p).simplified()
        e12 = RationalMap(-(gn * gn * qn), qd * p).simplified()
        entries = (e11, e12, e21)
        deriv1 = tuple(e.deriv() for e in entries)
        deriv2 = tuple(d.deriv() for d in deriv1)
        singular: list[complex] = []
        for e in entries:
            for r in e.den.roots():
                if not any(abs(r - s) <= 1e-7 for s in singular):
                    singular.append(complex(r))
        def mk(rm):
            nc, dc = rm.num.c, rm.den.c
            def ev(z, nc=nc, dc=dc):
                n = 0j
                for a in reversed(nc):
                    n = n * z + a
                d = 0j
                for a in reversed(dc):
                    d = d * z + a
                return n / d
            return ev
        return AlphaEntries(tuple(mk(e) for e in entries),
                            tuple(mk(e) for e in deriv1),
                            tuple(mk(e) for e in deriv2), singular)

    def eval(self, z):
        e = self._e
        return (e[0](z), e[1](z), e[2](z))

    def deriv1(self, z):
        d = self._d1
        return (d[0](z), d[1](z), d[2](z))

    def deriv2(self, z):
        d = self._d2
        return (d[0](z), d[1](z), d[2](z))

    def matrix(self, z) -> np.ndarray:
        a, b, c = self.eval(z)
        return mat(a, b, c, -a)

    def deriv_matrix(self, z, order: int = 1) -> np.ndarray:
        a, b, c = self.deriv1(z) if order == 1 else self.deriv2(z)
        return mat(a, b, c, -a)

    def weierstrass(self, z):
        """Euclidean integrand (1 - G^2, i(1 + G^2), 2G) q/G' at z."""
        a, b, c = self.eval(z)
        return (c + b, 1j * (c - b), 2.0 * a)


def _enneper_alpha() -> AlphaEntries:
    def e(z):
        return (cmath.sinh(z) * cmath.cosh(z), -cmath.sinh(z) ** 2,
                cmath.cosh(z) ** 2)
    def d1(z):
        return (cmath.cosh(2 * z), -cmath.sinh(2 * z), cmath.sinh(2 * z))
    def d2(z):
        return (2 * cmath.sinh(2 * z), -2 * cmath.cosh(2 * z),
                2 * cmath.cosh(2 * z))
    ent = AlphaEntries((lambda z: e(z)[0], lambda z: e(z)[1], lambda z: e(z)[2]),
                       (lambda z: d1(z)[0], lambda z: d1(z)[1], lambda z: d1(z)[2]),
                       (lambda z: d2(z)[0], lambda z: d2(z)[1], lambda z: d2(z)[2]),
                       ())
    return ent


@dataclass(frozen=True)
class WeierstrassData:
    """Gauss map G, Hopf density q, punctures, mirrors, loops, basepoint."""

    name: str
    G: RationalMap | AnalyticMap
    q: RationalMap
    punctures: tuple
    reflections: tuple = ()
    loops: dict = field(default_factory=dict)
    basepoint: complex = 0.0 + 0.0j
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "basepoint", complex(self.basepoint))
        object.__setattr__(self, "punctures",
                           tuple(INF if is_inf(p) else complex(p)
                                 for p in self.punctures))

    @property
    def alpha(self) -> AlphaEntries:
        cached = self.__dict__.get("_alpha")
        if cached is None:
            if isinstance(self.G, AnalyticMap):
                if self.G.name != "tanh":
                    raise DataError("no connection form for analytic map %s"
                                    % self.G.name)
                cached = _enneper_alpha()
            else:
                cached = AlphaEntries.from_rational(self.G, self.q)
            self.__dict__["_alpha"] = cached
        return cached

    def singular_points(self) -> tuple:
        pts = [p for p in self.punctures if not is_inf(p)]
        for s in self.alpha.singular_points:
            if not any(abs(s - p) <= 1e-9 for p in pts):
                pts.append(s)
        return tuple(pts)

    def reflection(self, label) -> Reflection:
        for r in self.reflections:
            if tuple(r.label) == tuple(label):
                return r
        raise DataError("no mirror with label %r" % (label,))

    def loop(self, name: str) -> PolyPath:
        if isinstance(name, PolyPath):
            return name
        try:
            return self.loops[name]
        except KeyError:
            raise DataError("no loop named %r" % (name,)) from None


@dataclass(frozen=True)
class RegularityReport:
    passed: bool
    violations: tuple
    checked: tuple
    mode: str = "divisor"


def _pole_order_of_G(G: RationalMap, p) -> int:
    if is_inf(p):
        o = G.num.degree - G.den.degree
        return max(0, o)
    from .rational import root_multiplicity
    return root_multiplicity(G.den, p)


def check_regular(data: WeierstrassData) -> RegularityReport:
    """Divisor test that the Gauss-map-side metric is positive definite.

    At every non-puncture p the requirement is
    ord_p(Q) - ord_p(dG) = 2 (pole order of G at p),
    which reduces to ord_p(Q) = ord_p(dG) wherever G is finite. The orders
    at infinity include the chart weights of dz^2 and dz.
    """
    G, q = data.G, data.q
    if isinstance(G, AnalyticMap):
        # sampled positivity on a ring grid; the analytic entry has no divisor
        ent = data.alpha
        bad = []
        for k in range(60):
            z = data.basepoint + 0.85 * cmath.exp(2j * math.pi * k / 60) * (1 + 0.3 * (k % 5))
            a, b, c = ent.eval(z)
            if not (abs(c) + abs(b)) > 0:
                bad.append(z)
        return RegularityReport(not bad, tuple(bad), (), mode="sampled")

    gder = RationalMap(G.num.deriv() * G.den - G.num * G.den.deriv(),
                       G.den * G.den)
    candidates: list = []
    for poly in (q.num, q.den, gder.num, gder.den, G.den):
        for r in poly.roots():
            candidates.append(complex(r))
    merged: list = []
    for z in candidates:
        if not any(abs(z - w) <= 1e-7 for w in merged):
            merged.append(z)
    if not any(is_inf(p) for p in data.punctures):
        merged.append(INF)

    violations = []
    checked = []
    for p in merged:
        if any((is_inf(p) and is_inf(t)) or
               (not is_inf(p) and not is_inf(t) and abs(p - t) <= 1e-7)
               for t in data.punctures):
            continue
        if is_inf(p):
            ord_q = q.order_at(INF) - 4
            ord_dg = gder.order_at(INF) - 2
        else:
            ord_q = q.order_at(p)
            ord_dg = gder.order_at(p)
        need = 2 * _pole_order_of_G(G, p)
        checked.append((p, ord_q, ord_dg, need))
        if ord_q - ord_dg != need:
            violations.append((p, ord_q, ord_dg, need))
    return RegularityReport(not violations, tuple(violations), tuple(checked))


def metric_dsG(data: WeierstrassData, z) -> float:
    """Density of (1+|G|^2)^2 |q/G'|^2 with respect to |dz|^2.

    Computed as (|e21| + |e12|)^2 from the connection entries, which stays
    finite across poles of G; a genuine pole of the density returns inf.
    """
    try:
        a, b, c = data.alpha.eval(complex(z))
    except ZeroDivisionError:
        return float("inf")
    v = abs(c) + abs(b)
    if math.isinf(v) or math.isnan(v):
        return float("inf")
    return v * v


def metric_dsigma(g_value, g_prime) -> float:
    """Spherical pullback density 4|g'|^2 / (1+|g|^2)^2."""
    if is_inf(g_value):
        raise SingularPointError("evaluate dsigma in the 1/g chart at poles of g")
    g = complex(g_value)
    gp = complex(g_prime)
    return 4.0 * abs(gp) ** 2 / (1.0 + abs(g) ** 2) ** 2


def euclid_period(data: WeierstrassData, loop, epsabs: float = 1e-11):
    """Complex period vector of (1 - G^2, i(1 + G^2), 2G) q/G' over a loop."""
    path = data.loop(loop)
    ent = data.alpha
    vec = contour_integral(lambda z: ent.weierstrass(z), path,
                           epsabs=epsabs, components=3)
    return np.asarray(vec, dtype=complex)


def minimal_immerse(data: WeierstrassData, path, epsabs: float = 1e-11) -> np.ndarray:
    """Euclidean minimal immersion value at the end of the path, starting at 0."""
    if not isinstance(path, PolyPath):
        path = PolyPath(tuple(path))
    ent = data.alpha
    vec = contour_integral(lambda z: ent.weierstrass(z), path,
                           epsabs=epsabs, components=3)
    return np.asarray(vec, dtype=complex).real


def _equiv_samples(g1, g2, omega1, omega2, count):
    out = []
    k = 0
    z = 0.31 + 0.21j
    step = 0.611 - 0.403j
    while len(out) < count and k < 400:
        k += 1
        z = 0.31 + 0.21j + step * (k ** 0.5) * cmath.exp(0.7j * k)
        z = complex(z.real % 2.1 - 1.0, z.imag % 1.9 - 0.9)
        try:
            vals = (g1(z), g2(z), omega1(z), omega2(z))
        except (SingularPointError, ZeroDivisionError):
            continue
        if any(is_inf(v) for v in vals):
            continue
        if any(abs(v) > 50 for v in vals) or abs(vals[2]) < 1e-12:
            continue
        out.append((z,) + vals)
    if len(out) < count:
        raise DataError("could not sample enough regular points")
    return out


def su2_equivalent(d1, d2, tol: float = 1e-8):
    """SU(2) change b with g2 = (p g1 - conj q)/(q g1 + conj p), omega2 matched.

    d1 and d2 are (g, omega) pairs of rational maps. Returns b = [[p, -conj q],
    [q, conj p]] or None. The candidate comes from a null-space fit on 12
    samples and is then verified at 10 further samples.
    """
    g1, w1 = d1
    g2, w2 = d2
    fit = _equiv_samples(g1, g2, w1, w2, 12)
    rows = []
    for z, a, b_, _, _ in fit:
        # p*(g) + pbar*(-g2) + q*(-g2 g) + qbar*(-1) = 0 as real 4-vector rows
        cp, cpb, cq, cqb = a, -b_, -b_ * a, -1.0 + 0j
        c1 = cp + cpb          # multiplies Re p
        c2 = 1j * (cp - cpb)   # multiplies Im p
        c3 = cq + cqb
        c4 = 1j * (cq - cqb)
        rows.append([c1.real, c2.real, c3.real, c4.real])
        rows.append([c1.imag, c2.imag, c3.imag, c4.imag])
    A = np.asarray(rows, dtype=float)
    _, s, vt = np.linalg.svd(A)
    if s[-2] < 1e-6:
        # degenerate fit; fall through with the best vector anyway
        pass
    x = vt[-1]
    p = complex(x[0], x[1])
    qq = complex(x[2], x[3])
    nrm = math.sqrt(abs(p) ** 2 + abs(qq) ** 2)
    if nrm < 1e-12:
        return None
    p, qq = p / nrm, qq / nrm
    b = mat(p, -np.conj(qq), qq, np.conj(p))

    check = _equiv_samples(g1, g2, w1, w2, 22)[12:]
    for z, a, bb, wa, wb in check:
        den = qq * a + np.conj(p)
        if abs(den) < 1e-9:
            return None
        if abs((p * a - np.conj(qq)) / den - bb) > tol * max(1.0, abs(bb)):
            return None
        if abs(den * den * wa - wb) > tol * max(1.0, abs(wb)):
            return None
    return b


# ---------------------------------------------------------------------------
# catalog


def _tanh_map() -> AnalyticMap:
    return AnalyticMap(
        "tanh", cmath.tanh,
        d1=lambda z: 1.0 - cmath.tanh(z) ** 2,
        d2=lambda z: -2.0 * cmath.tanh(z) * (1.0 - cmath.tanh(z) ** 2),
        d3=lambda z: (1.0 - cmath.tanh(z) ** 2) * (6.0 * cmath.tanh(z) ** 2 - 2.0),
        schwarzian_fn=lambda z: -2.0 + 0j,
    )


def _catenoid() -> WeierstrassData:
    G = RationalMap.from_coeffs([0, 1])
    q = RationalMap.from_coeffs([1], [0, 0, 1])
    refl = (
        Reflection((1, 1), np.eye(2), sigma_from_normal((0, 1, 0)),
                   normal=(0, 1, 0), anchor=1.0),
        Reflection((2, 1), mat(1j, 0, 0, -1j), sigma_from_normal((-1, 0, 0)),
                   normal=(-1, 0, 0), anchor=1j,
                   anchor_path=PolyPath((1.0, 1j))),
        Reflection((3, 1), mat(0, 1j, 1j, 0), sigma_from_normal((0, 0, 1)),
                   normal=(0, 0, 1), anchor=1.0),
    )
    loops = {"end": loop_around(1.0, 0.0, 1.0, n=12)}
    return WeierstrassData("catenoid", G, q, (0.0, INF), refl, loops, 1.0,
                           params={"mn": (2, 2), "ends": 2, "orbit_factor": 8,
                                   "end_word": ((1, 1), (2, 1), (1, 1), (2, 1))})


def _enneper() -> WeierstrassData:
    q = RationalMap.from_coeffs([1])
    refl = (
        Reflection((1, 1), np.eye(2), sigma_from_normal((0, 1, 0)),
                   normal=(0, 1, 0), anchor=0.0),
        Reflection((2, 1), mat(1j, 0, 0, -1j), sigma_from_normal((-1, 0, 0)),
                   normal=(-1, 0, 0), anchor=0.0),
    )
    return WeierstrassData("enneper", _tanh_map(), q, (INF,), refl, {}, 0.0,
                           params={"ends": 1})


def _noid(n: int) -> WeierstrassData:
    if n < 3:
        raise CatalogError("noid(n) needs n >= 3")
    G = RationalMap(Poly([0] * (n - 1) + [1]), Poly([1]))
    ring = Poly([-1] + [0] * (n - 1) + [1])      # z^n - 1
    # numerator scale n^2 gives every end the unit weight of z^-2 dz^2
    q = RationalMap(Poly([0] * (n - 2) + [n * n]), ring * ring)
    punctures = tuple(cmath.exp(2j * math.pi * k / n) for k in range(n))
    a = math.pi / n
    refl = (
        Reflection((1, 1), np.eye(2), sigma_from_normal((0, 1, 0)),
                   normal=(0, 1, 0), anchor=0.5),
        Reflection((2, 1), mat(cmath.exp(-1j * a), 0, 0, cmath.exp(1j * a)),
                   sigma_from_normal((-math.sin(a), math.cos(a), 0)),
                   normal=(-math.sin(a), math.cos(a), 0),
                   anchor=0.5 * cmath.exp(-1j * a),
                   anchor_path=PolyPath((0.5, 0.5 * cmath.exp(-1j * a)))),
        Reflection((3, 1), mat(0, 1j, 1j, 0), sigma_from_normal((0, 0, 1)),
                   normal=(0, 0, 1), anchor=cmath.exp(-0.5j * a),
                   anchor_path=PolyPath((0.5, cmath.exp(-0.5j * a)))),
    )
    loops = {
        "end": loop_around(0.5, 1.0, 0.4, n=12),
        "end2": loop_around(0.5, cmath.exp(-2j * math.pi / n), 0.4, n=12),
    }
    return WeierstrassData("noid(%d)" % n, G, q, punctures, refl, loops, 0.5,
                           params={"mn": (2, n), "ends": n, "orbit_factor": 4 * n,
                                   "end_word": ((1, 1), (3, 1), (1, 1), (3, 1))})


_PLATONIC = ("tetrahedral", "hexahedral", "octahedral",
             "dodecahedral", "icosahedral")


def catalog_names() -> tuple:
    return ("catenoid", "enneper", "noid(n)",) + tuple(
        "platonic(%s)" % k for k in _PLATONIC)


def catalog(name: str) -> WeierstrassData:
    """Builtin Weierstrass data by name: catenoid, enneper, noid(n)."""
    key = name.strip().lower()
    if key == "catenoid":
        return _catenoid()
    if key == "enneper":
        return _enneper()
    if key.startswith("noid(") and key.endswith(")"):
        try:
            n = int(key[5:-1])
        except ValueError:
            raise CatalogError("bad noid argument in %r" % name) from None
        return _noid(n)
    if key.startswith("platonic(") and key.endswith(")"):
        kind = key[9:-1]
        if kind in _PLATONIC:
            raise CatalogError(
                "no closed-form Weierstrass data ships for %r; its admissible "
                "curvature range and symmetry data are available through the "
                "genus-zero range functions" % name)
        raise CatalogError("unknown platonic kind %r" % kind)
    raise CatalogError("unknown surface %r" % name)


# ---------------------------------------------------------------------------
# serialization


def _c2j(z):
    if is_inf(z):
        return "inf"
    z = complex(z)
    return [z.real, z.imag]


def _j2c(v):
    if v == "inf":
        return INF
    return complex(v[0], v[1])


def _mat2j(a):
    a = np.asarray(a, dtype=complex)
    return [[_c2j(a[i, j]) for j in range(2)] for i in range(2)]


def _j2mat(v):
    return mat(_j2c(v[0][0]), _j2c(v[0][1]), _j2c(v[1][0]), _j2c(v[1][1]))


def data_to_json(data: WeierstrassData) -> str:
    def map2j(m):
        if isinstance(m, AnalyticMap):
            return {"analytic": m.name}
        return {"num": [_c2j(c) for c in m.num.c],
                "den": [_c2j(c) for c in m.den.c]}
    doc = {
        "schema": "v1",
        "name": data.name,
        "G": map2j(data.G),
        "q": map2j(data.q),
        "punctures": [_c2j(p) for p in data.punctures],
        "reflections": [
            {
                "label": list(r.label),
                "mobius": _mat2j(r.mobius),
                "sigma": _mat2j(r.sigma),
                "normal": list(r.normal) if r.normal is not None else None,
                "anchor": _c2j(r.anchor) if r.anchor is not None else None,
                "anchor_path": ([_c2j(w) for w in r.anchor_path.waypoints]
                                if r.anchor_path is not None else None),
            }
            for r in data.reflections
        ],
        "loops": {k: {"waypoints": [_c2j(w) for w in p.waypoints],
                      "closed": p.closed}
                  for k, p in sorted(data.loops.items())},
        "basepoint": _c2j(data.basepoint),
        "params": {k: (list(v) if isinstance(v, tuple) else v)
                   for k, v in sorted(data.params.items())},
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def data_from_json(text: str) -> WeierstrassData:
    doc = json.loads(text)

    def j2map(v):
        if "analytic" in v:
            if v["analytic"] == "tanh":
                return _tanh_map()
            raise DataError("unknown analytic map %r" % v["analytic"])
        return RationalMap(Poly([_j2c(c) for c in v["num"]]),
                           Poly([_j2c(c) for c in v["den"]]))

    refl = tuple(
        Reflection(tuple(r["label"]), _j2mat(r["mobius"]), _j2mat(r["sigma"]),
                   normal=tuple(r["normal"]) if r.get("normal") else None,
                   anchor=_j2c(r["anchor"]) if r.get("anchor") is not None else None,
                   anchor_path=(PolyPath(tuple(_j2c(w) for w in r["anchor_path"]))
                                if r.get("anchor_path") else None))
        for r in doc["reflections"]
    )
    loops = {k: PolyPath(tuple(_j2c(w) for w in v["waypoints"]),
                         closed=v.get("closed", False))
             for k, v in doc.get("loops", {}).items()}
    params = {k: (tuple(v) if isinstance(v, list) else v)
              for k, v in doc.get("params", {}).items()}
    return WeierstrassData(
        doc.get("name", "unnamed"), j2map(doc["G"]), j2map(doc["q"]),
        tuple(_j2c(p) for p in doc["punctures"]), refl, loops,
        _j2c(doc["basepoint"]), params=params)
