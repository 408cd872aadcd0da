import cmath
import math

import numpy as np
import pytest

from cmcforge import wdata
from cmcforge.algebra import INF, frobenius, is_su2, mat, mobius_apply
from cmcforge.errors import CatalogError, DataError
from cmcforge.paths import PolyPath
from cmcforge.wdata import (catalog, check_regular, data_from_json,
                            data_to_json, euclid_period, metric_dsG,
                            metric_dsigma, minimal_immerse, sigma_from_normal,
                            su2_equivalent)


def test_catalog_names():
    for name in ("catenoid", "enneper", "noid(3)", "noid(5)"):
        d = catalog(name)
        assert d.name == name
    with pytest.raises(CatalogError):
        catalog("torus")
    with pytest.raises(CatalogError):
        catalog("noid(2)")


def test_catenoid_alpha_entries():
    d = catalog("catenoid")
    e11, e12, e21 = d.alpha.eval(1.0)
    # G=z, q=z^-2: entries (G q/G', -G^2 q/G', q/G') at z=1
    assert abs(e11 - 1.0) < 1e-14
    assert abs(e12 + 1.0) < 1e-14
    assert abs(e21 - 1.0) < 1e-14


def test_alpha_matrix_is_traceless_nilpotent():
    d = catalog("noid(3)")
    rng = np.random.default_rng(2)
    for _ in range(10):
        z = complex(rng.normal(), rng.normal())
        if min(abs(z - p) for p in d.punctures) < 0.3:
            continue
        a = d.alpha.matrix(z)
        assert abs(np.trace(a)) < 1e-12 * max(1.0, frobenius(a))
        assert abs(np.linalg.det(a)) < 1e-12 * max(1.0, frobenius(a)) ** 2


def test_alpha_derivative_matches_fd():
    d = catalog("catenoid")
    z, h = 0.8 + 0.3j, 1e-6
    a1 = d.alpha.deriv_matrix(z, 1)
    fd = (d.alpha.matrix(z + h) - d.alpha.matrix(z - h)) / (2 * h)
    assert frobenius(a1 - fd) < 1e-7


def test_reflection_invariants_catalog():
    # mirror data: involutive Mobius in the chart, special unitary sigma on
    # the Gauss map side, and G(mu z) = sigma . conj(G(z)) at sampled points
    rng = np.random.default_rng(9)
    for name in ("catenoid", "noid(3)", "noid(4)"):
        d = catalog(name)
        for r in d.reflections:
            mm = r.mobius @ np.conj(r.mobius)
            sgn = mm[0, 0].real
            assert frobenius(mm - sgn * np.eye(2)) < 1e-12
            assert is_su2(r.sigma, tol=1e-9)
            for _ in range(50):
                z = complex(rng.normal(), rng.normal())
                if min(abs(z - p) for p in d.punctures
                       if p != INF) < 0.2 or abs(z) < 0.1:
                    continue
                w = r.apply(z)
                assert abs(r.apply(w) - z) < 1e-9 * max(1.0, abs(z))
                gz, gw = d.G(z), d.G(w)
                if gz == INF or gw == INF:
                    continue
                rhs = mobius_apply(r.sigma, np.conj(gz))
                assert abs(gw - rhs) < 1e-9 * max(1.0, abs(rhs))


def test_reflection_hopf_invariance():
    # Q = q dz^2 satisfies Q(mu z) mu'(z)^2 = conj(Q(z)) on every mirror
    rng = np.random.default_rng(11)
    for name in ("catenoid", "noid(3)"):
        d = catalog(name)
        for r in d.reflections:
            for _ in range(20):
                z = complex(rng.normal(), rng.normal())
                if min(abs(z - p) for p in d.punctures
                       if p != INF) < 0.3 or abs(z) < 0.2:
                    continue
                lhs = d.q(r.apply(z)) * r.deriv(z) ** 2
                want = np.conj(d.q(z))
                assert abs(lhs - want) < 1e-9 * max(1.0, abs(want))


def test_reflection_anchor_fixed():
    for name in ("catenoid", "noid(3)"):
        d = catalog(name)
        for r in d.reflections:
            assert abs(r.apply(r.anchor) - r.anchor) < 1e-12


def test_check_regular_catalog():
    for name in ("catenoid", "enneper", "noid(3)", "noid(4)", "noid(5)"):
        rep = check_regular(catalog(name))
        assert rep.passed, rep


def test_check_regular_rejects_mismatch():
    # q with a pole order not matching the Gauss map branching
    from cmcforge.rational import Poly, RationalMap
    bad = wdata.WeierstrassData(
        name="bad", G=RationalMap(Poly((0, 1)), Poly((1,))),
        q=RationalMap(Poly((1,)), Poly((0, 0, 0, 1))),   # z^-3
        punctures=(0.0,), reflections=(), loops={}, basepoint=1.0)
    rep = check_regular(bad)
    assert not rep.passed
    assert rep.violations


def test_metric_densities():
    d = catalog("catenoid")
    # at z=1: |e21|+|e12| = 2, so the conformal factor is 4
    assert abs(metric_dsG(d, 1.0) - 4.0) < 1e-12
    # sphere pullback density 4|G'|^2/(1+|G|^2)^2 for G = z
    z = 1.3 + 0.4j
    want = 4.0 / (1.0 + abs(z) ** 2) ** 2
    assert abs(metric_dsigma(d.G(z), d.G.deriv()(z)) - want) < 1e-12


def test_euclid_period_catenoid():
    d = catalog("catenoid")
    per = euclid_period(d, d.loop("end"))
    assert max(abs(p.real) for p in per) < 1e-10
    assert abs(per[0].imag) < 1e-8
    assert abs(per[1].imag) < 1e-8
    assert abs(per[2].imag - 4 * math.pi) < 1e-8


def test_euclid_period_noid_end():
    # unit-weight ends: residue of q/G' style integrand gives -4 pi i
    d = catalog("noid(3)")
    per = euclid_period(d, d.loop("end"))
    assert abs(per[0] + 4j * math.pi) < 1e-8
    assert abs(per[1]) < 1e-8
    assert abs(per[2]) < 1e-8


def test_euclid_period_contractible():
    d = catalog("catenoid")
    lp = PolyPath((2.0, 2.0 + 1j, 3.0, 2.0), closed=True)
    per = euclid_period(d, lp)
    assert max(abs(p) for p in per) < 1e-10


def test_minimal_immerse_closed_loop():
    d = catalog("catenoid")
    val = minimal_immerse(d, d.loop("end"))
    # real periods vanish for the catenoid
    assert max(abs(v) for v in val) < 1e-10


def test_minimal_immerse_known_height():
    # third component is Re int 2 q G/G' dz = 2 ln|z| for the catenoid
    d = catalog("catenoid")
    val = minimal_immerse(d, PolyPath((1.0, cmath.exp(1.0))))
    assert abs(val[2] - 2.0) < 1e-9


def test_sigma_from_normal():
    s = sigma_from_normal((0.0, 1.0, 0.0))
    assert frobenius(s - np.eye(2)) < 1e-14
    s = sigma_from_normal((-1.0, 0.0, 0.0))
    assert is_su2(s)
    assert frobenius(s @ np.conj(s) - np.eye(2)) < 1e-12


def test_su2_equivalent():
    from cmcforge.rational import Poly, RationalMap
    g1 = RationalMap(Poly((0, 1)), Poly((1,)))       # z
    w1 = RationalMap(Poly((1,)), Poly((0, 0, 1)))    # 1/z^2
    th = 0.61
    p, q = math.cos(th) * cmath.exp(0.4j), math.sin(th) * cmath.exp(-0.9j)
    # rotated pair: g2 = (p g1 - conj q)/(q g1 + conj p), w2 = den^2 w1
    den = Poly((np.conj(p), q))
    g2 = RationalMap(Poly((-np.conj(q), p)), den)
    w2 = RationalMap(den * den, Poly((0, 0, 1)))
    b = su2_equivalent((g1, w1), (g2, w2))
    assert b is not None and is_su2(b, tol=1e-7)
    want = mat(p, -np.conj(q), q, np.conj(p))
    assert min(frobenius(b - want), frobenius(b + want)) < 1e-6
    # self equivalence recovers +-identity
    b0 = su2_equivalent((g1, w1), (g1, w1))
    assert b0 is not None
    assert min(frobenius(b0 - np.eye(2)), frobenius(b0 + np.eye(2))) < 1e-6
    # mismatched pair is rejected
    g3 = RationalMap(Poly((0, 0, 1)), Poly((1,)))    # z^2
    w3 = RationalMap(Poly((1,)), Poly((0, 0, 0, 1)))
    assert su2_equivalent((g1, w1), (g3, w3)) is None


def test_json_roundtrip():
    for name in ("catenoid", "noid(3)", "enneper"):
        d = catalog(name)
        blob = data_to_json(d)
        d2 = data_from_json(blob)
        assert d2.name == d.name
        assert d2.punctures == d.punctures
        assert d2.basepoint == d.basepoint
        z = 0.37 + 0.21j
        assert abs(d2.G(z) - d.G(z)) < 1e-14
        assert abs(d2.q(z) - d.q(z)) < 1e-14
        assert len(d2.reflections) == len(d.reflections)


def test_singular_points():
    d = catalog("noid(3)")
    pts = d.singular_points()
    for p in d.punctures:
        assert any(abs(p - s) < 1e-12 for s in pts if s != INF)
