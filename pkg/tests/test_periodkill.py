import math

import numpy as np
import pytest

from cmcforge.algebra import det2, frobenius, inv2, is_su2, mat, random_su2
from cmcforge.errors import BranchError, NormalizationError
from cmcforge.genus0 import lambda_of_c
from cmcforge.nullcurve import monodromy, reflection_matrix
from cmcforge.periodkill import (CommutantClass, classify_commutant,
                                 compute_rep, is_reducible, mirror_form,
                                 noid_family, rho_from_word, solve_lambda,
                                 step2_diagonalize, step3_scale, su2_residual,
                                 synthetic_family, unitarize)
from cmcforge.wdata import catalog


def _mirror(p, b1):
    # det-1 mirror-form matrix [[p, i b1], [i b2, conj p]]
    b2 = (1.0 - abs(p) ** 2) / b1
    return mat(p, 1j * b1, 1j * b2, np.conj(p))


def test_mirror_form_roundtrip():
    p, b1 = 0.3 + 0.4j, 0.6
    rho = _mirror(p, b1)
    assert abs(det2(rho) - 1.0) < 1e-14
    assert frobenius(rho @ np.conj(rho) - np.eye(2)) < 1e-14
    pp, g1, g2 = mirror_form(rho)
    assert abs(pp - p) < 1e-14
    assert abs(g1 - b1) < 1e-14
    assert abs(g2 - (1 - abs(p) ** 2) / b1) < 1e-14


def test_mirror_form_rejects_generic_matrix():
    with pytest.raises(NormalizationError):
        mirror_form(mat(1.0, 0.5, 0.2, 1.1))


def test_su2_residual_sign_and_zero():
    # residual is g2 - g1; vanishes exactly on SU(2) members
    p = 0.5 + 0.1j
    s = math.sqrt(1 - abs(p) ** 2)
    assert abs(su2_residual(_mirror(p, s))) < 1e-14
    assert su2_residual(_mirror(p, 0.5 * s)) > 0
    assert su2_residual(_mirror(p, 2.0 * s)) < 0


def test_step2_diagonalize():
    rho = _mirror(0.2 + 0.9j, 0.31)
    u, xi = step2_diagonalize(rho)
    assert np.allclose(u.imag, 0)
    assert abs(det2(u) - 1.0) < 1e-12
    d = inv2(u) @ rho @ np.conj(u)
    assert abs(d[0, 1]) < 1e-12 and abs(d[1, 0]) < 1e-12
    assert abs(d[0, 0] - xi) < 1e-12
    assert abs(abs(xi) - 1.0) < 1e-12 and xi.imag > 0


def test_step2_needs_elliptic_trace():
    with pytest.raises(BranchError):
        step2_diagonalize(_mirror(1.2 + 0.0j, 0.5))


def test_step3_scale():
    rho = _mirror(0.4 - 0.2j, 0.35)
    d, beta = step3_scale(rho)
    out = inv2(d) @ rho @ np.conj(d)
    assert is_su2(out, tol=1e-12)
    assert abs(out[0, 1] / 1j - beta) < 1e-12
    # |p| > 1 forces the off-diagonal product negative: outside existence
    with pytest.raises(NormalizationError):
        step3_scale(_mirror(1.2 + 0.0j, 0.5))


def test_unitarize_trinoid_steps():
    # genus-0 three-ended datum at small curvature:
    # mirror 1 pinned at I, mirror 2 becomes diag(xi, conj xi) with
    # Re xi = cos(pi/3), mirror 3 lands in SU(2) off-diagonal balanced
    d = catalog("noid(3)")
    c = 0.05
    res = unitarize(d, c)
    rep = res.rep
    assert frobenius(rep.rho((1, 1)) - np.eye(2)) < 1e-9
    r2 = rep.rho((2, 1))
    assert abs(r2[0, 1]) < 1e-9 and abs(r2[1, 0]) < 1e-9
    assert abs(res.xi - r2[0, 0]) < 1e-12
    assert abs(abs(res.xi) - 1.0) < 1e-7
    assert abs(res.xi.real - math.cos(math.pi / 3)) < 1e-10
    r3 = rep.rho((3, 1))
    assert abs(r3[0, 1] - r3[1, 0]) < 1e-6
    assert abs(res.beta - abs(r3[0, 1])) < 1e-9
    # trace of the balanced third mirror: -2 cos(pi lambda / 2)
    lam = lambda_of_c(c)
    assert abs(np.trace(r3).real + 2 * math.cos(math.pi * lam / 2)) < 1e-9
    assert abs(np.trace(r3).imag) < 1e-9
    # closing relation: the composed half-turn squares to -I
    w = r2 @ np.conj(r3)
    assert frobenius(w @ w + np.eye(2)) < 1e-8
    assert max(res.residuals.values()) < 1e-7
    # the representation is irreducible: fixed-point set is a point
    cls, _ = classify_commutant(list(rep.rhos.values()))
    assert cls is CommutantClass.POINT


def test_unitarize_gauge_consistency():
    # gauging the raw matrices by the returned gauge reproduces rep
    d = catalog("noid(3)")
    c = -0.04
    res = unitarize(d, c)
    raw = compute_rep(d, c)
    re_gauged = raw.gauged(res.gauge)
    for k in raw.rhos:
        assert frobenius(re_gauged.rhos[k] - res.rep.rhos[k]) < 1e-9


def test_unitarize_rejects_far_curvature():
    # far enough outside the existence range the balancing pair changes
    # sign and the third mirror cannot be unitarized
    with pytest.raises(NormalizationError):
        unitarize(catalog("noid(3)"), 0.24)


def test_word_product_matches_monodromy():
    # mirror word of the end deck transformation, alternating conjugation,
    # equals minus the frame holonomy of the end loop
    for name, c in (("catenoid", 0.1), ("noid(3)", 0.05), ("noid(4)", -0.03)):
        d = catalog(name)
        rep = compute_rep(d, c)
        W = rho_from_word(rep, d.params["end_word"])
        M = monodromy(d, "end", c)
        assert frobenius(W + M) < 1e-9


def test_rho_from_word_accepts_plain_dict():
    a, b = random_su2(np.random.default_rng(3)), random_su2(np.random.default_rng(4))
    rhos = {(1, 1): a, (2, 1): b}
    W = rho_from_word(rhos, ((1, 1), (2, 1), (1, 1)))
    assert frobenius(W - a @ np.conj(b) @ a) < 1e-14


def test_classify_commutant_exhaustive():
    I2 = np.eye(2)
    cls, axis = classify_commutant([I2, -I2])
    assert cls is CommutantClass.ALL and axis is None
    th = 0.8
    dz = mat(np.exp(1j * th), 0, 0, np.exp(-1j * th))
    cls, axis = classify_commutant([dz, -I2])
    assert cls is CommutantClass.GEODESIC
    assert np.allclose(axis, [0.0, 0.0, 1.0], atol=1e-12)
    ux = mat(0, 1j, 1j, 0)
    cls, axis = classify_commutant([dz, ux])
    assert cls is CommutantClass.POINT and axis is None
    # same-axis powers stay geodesic
    cls, axis = classify_commutant([dz, dz @ dz, inv2(dz)])
    assert cls is CommutantClass.GEODESIC
    assert np.allclose(axis, [0.0, 0.0, 1.0], atol=1e-12)


def _shares_eigenline(mats, tol=1e-7):
    # independent reducibility oracle: a common eigenvector exists
    noncentral = [m for m in mats
                  if min(frobenius(m - np.eye(2)), frobenius(m + np.eye(2))) > 1e-9]
    if not noncentral:
        return True
    _, vecs = np.linalg.eig(noncentral[0])
    for j in range(2):
        v = vecs[:, j] / np.linalg.norm(vecs[:, j])
        ok = True
        for m in noncentral[1:]:
            w = m @ v
            w = w / np.linalg.norm(w)
            if abs(abs(np.vdot(v, w)) - 1.0) > tol:
                ok = False
                break
        if ok:
            return True
    return False


def test_classify_commutant_random_sets():
    rng = np.random.default_rng(12)
    for trial in range(100):
        kind = trial % 4
        if kind == 0:
            mats = [random_su2(rng) for _ in range(3)]
        elif kind == 1:
            u = random_su2(rng)
            mats = [u, u @ u, inv2(u)]
        elif kind == 2:
            sgn = [1, -1][trial % 2]
            mats = [sgn * np.eye(2, dtype=complex)]
        else:
            u = random_su2(rng)
            mats = [u, -u, random_su2(rng)]
        cls, _ = classify_commutant(mats)
        assert is_reducible(mats) == (cls is not CommutantClass.POINT)
        assert _shares_eigenline(mats) == is_reducible(mats), (trial, cls)


def test_synthetic_family_linear_period():
    fam = synthetic_family()
    assert fam.per(1.3) == 1.3
    # residual behaves as 2 c lam + O(c^2)
    lam = 0.7
    errs = []
    for c in (0.02, 0.01, 0.005):
        rho = reflection_matrix(fam.data(lam), fam.label, c, tol=1e-12)
        errs.append(abs(su2_residual(rho) - 2 * c * lam))
    for e0, e1 in zip(errs, errs[1:]):
        assert math.log2(e0 / e1) > 1.9, errs


def test_solve_lambda_synthetic():
    fam = synthetic_family()
    res = solve_lambda(fam, 0.02)
    assert res.residual <= 1e-11
    assert res.iterations <= 20
    assert abs(res.lam) < 0.1
    # at the killed parameter the raw second-sheet mirror is unitary
    rho = reflection_matrix(fam.data(res.lam), fam.label, 0.02, tol=1e-12)
    assert is_su2(rho, tol=1e-9)


def test_solve_lambda_dim_zero_family():
    # the symmetric noid has no period parameters: membership is decided
    # by the gauge moves alone and the solve returns immediately
    fam = noid_family(3)
    assert fam.dim == 0
    res = solve_lambda(fam, 0.05)
    assert res.lam == ()
    assert res.iterations == 0
    assert res.residual < 1e-7
    with pytest.raises(NormalizationError):
        solve_lambda(fam, 0.24)


def test_noid_family_rejects_parameters():
    from cmcforge.errors import DataError
    with pytest.raises(DataError):
        noid_family(3).data(0.4)


def test_solve_lambda_rejects_zero_curvature():
    with pytest.raises(BranchError):
        solve_lambda(synthetic_family(), 0.0)
