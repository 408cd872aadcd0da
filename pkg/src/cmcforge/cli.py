"""Command line front end: catalog listing, range tables, the solve
pipeline, mesh export, and invariant verification suites.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__, wdata
from .algebra import frobenius, mat
from .errors import CatalogError, CmcForgeError, DataError, PathError
from .genus0 import (format_table1, lambda_of_c, range_report, table1_json,
                     total_abs_curvature)
from .nullcurve import monodromy, secondary_gauss, secondary_schwarzian
from .paths import PolyPath
from .periodkill import classify_commutant, compute_rep, unitarize
from .rational import schwarzian
from .surface import (GridSpec, build_fundamental_mesh, default_grid,
                      export_json, export_obj, import_obj, numeric_ta,
                      reflect_orbit)

USAGE_ERROR = 1
VERIFY_ERROR = 2

_CATALOG_NAMES = ("catenoid", "enneper", "noid(3)", "noid(4)", "noid(5)")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this front end reserves 2 for
    verification failures, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, "%s: error: %s\n" % (self.prog, message))


def _add_common(sp):
    sp.add_argument("--surface", required=True, help="catalog entry name")
    sp.add_argument("--c", required=True, type=float,
                    help="mean curvature of the ambient space, nonzero")
    sp.add_argument("--tol", type=float, default=1e-10,
                    help="integration tolerance in [1e-14, 1e-6]")
    sp.add_argument("--force", action="store_true",
                    help="run even when c lies outside the certified range")
    sp.add_argument("--no-meta", action="store_true",
                    help="omit timestamp/version metadata from JSON output")


def build_parser():
    parser = _Parser(prog="cmcforge", description=__doc__)
    parser.add_argument("--config", default=None,
                        help="JSON file with default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("catalog", parents=[], help="list bundled data")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("ranges", help="certified c and curvature ranges")
    sp.add_argument("--m", type=int, help="wedge angle divisor at vertices")
    sp.add_argument("--n", type=int, help="wedge angle divisor at ends")
    sp.add_argument("--table", action="store_true",
                    help="print the five symmetric families")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("solve", help="run the period-killing pipeline")
    _add_common(sp)
    sp.add_argument("--out", default=None, help="write the JSON report here")

    sp = sub.add_parser("mesh", help="build and export a surface mesh")
    _add_common(sp)
    sp.add_argument("--out", required=True, help="output OBJ path")
    sp.add_argument("--grid", default=None, metavar="NUxNV",
                    help="grid resolution, e.g. 24x24")
    sp.add_argument("--orbit-depth", type=int, default=0,
                    help="mirror word length for the reflection orbit")
    sp.add_argument("--report", default=None, help="JSON report path")
    sp.add_argument("--no-ta", action="store_true",
                    help="skip the total-curvature quadrature")

    sp = sub.add_parser("verify", help="run invariant suites")
    sp.add_argument("--suite", default="all",
                    choices=("identities", "ranges", "pipeline", "mesh",
                             "all"))
    return parser, sub


def _meta(args) -> dict:
    if getattr(args, "no_meta", False):
        return {}
    return {"meta": {"generated_at":
                     time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                     "version": __version__}}


def _check_tol(parser, tol):
    if not (1e-14 <= tol <= 1e-6):
        parser.error("--tol must lie in [1e-14, 1e-6], got %g" % tol)


def certified_range(data):
    """Open c-interval where closing of the surface is established.

    Wedge families use the exact rational endpoints (the cyclic catenoid
    wedge included); simply connected data has no period problem and is
    certified for every c below the branch limit.
    """
    if "mn" in data.params:
        m, n = data.params["mn"]
        t = m / 2.0 - float(m) / n
        lo = (1.0 - (2.0 - t) ** 2) / 4.0
        hi = (1.0 - t ** 2) / 4.0
        return lo, hi
    return -math.inf, 0.25


def _check_c(parser, data, c, force, need_nonzero):
    if need_nonzero and c == 0.0:
        parser.error("--c must be nonzero for this command")
    lo, hi = certified_range(data)
    if not (lo < c < hi) and not force:
        parser.error("c=%g outside the certified range (%g, %g); "
                     "pass --force to run anyway" % (c, lo, hi))


def _load_data(parser, name):
    try:
        return wdata.catalog(name)
    except CatalogError as exc:
        parser.error(str(exc))


# ---------------------------------------------------------------------------
# subcommands


def cmd_catalog(args) -> int:
    entries = []
    for name in _CATALOG_NAMES:
        d = wdata.catalog(name)
        entries.append({
            "name": name,
            "ends": d.params.get("ends"),
            "punctures": [("inf" if p == complex("inf") else [p.real, p.imag])
                          for p in d.punctures],
            "reflections": [list(r.label) for r in d.reflections],
            "certified_c": list(certified_range(d)),
        })
    if args.json:
        sys.stdout.write(export_json({"catalog": entries}))
        return 0
    for e in entries:
        lo, hi = e["certified_c"]
        print("%-9s ends=%s  reflections=%d  certified c in (%g, %g)"
              % (e["name"], e["ends"], len(e["reflections"]), lo, hi))
    return 0


def cmd_ranges(args, parser) -> int:
    if args.table or (args.m is None and args.n is None):
        if args.json:
            sys.stdout.write(export_json(table1_json()))
        else:
            print(format_table1())
        return 0
    if args.m is None or args.n is None:
        parser.error("--m and --n must be given together")
    try:
        rep = range_report(args.m, args.n)
    except (ValueError, CmcForgeError) as exc:
        parser.error(str(exc))
    if args.json:
        sys.stdout.write(export_json(rep))
        return 0
    cneg, cpos = rep["c_range"]["negative"], rep["c_range"]["positive"]
    tpos = rep["ta_over_pi"]["positive_c"]
    tneg = rep["ta_over_pi"]["negative_c"]
    print("m=%d n=%d ends=%d" % (rep["m"], rep["n"], rep["ends"]))
    print("c range: (%s, %s) u (%s, %s)" % (cneg[0], cneg[1],
                                            cpos[0], cpos[1]))
    print("TA/pi range: (%s, %s) u (%s, %s)" % (tpos[0], tpos[1],
                                                tneg[0], tneg[1]))
    return 0


def _solve_report(data, c, tol) -> dict:
    res = unitarize(data, c, tol=tol)
    report = {
        "surface": data.name,
        "c": c,
        "lambda": lambda_of_c(c) if c < 0.25 else None,
        "su2_residuals": {"%d,%d" % k: v for k, v in res.residuals.items()},
        "max_su2_residual": max(res.residuals.values()),
        "xi": [res.xi.real, res.xi.imag],
        "beta": res.beta,
    }
    cls, _ = classify_commutant(list(res.rep.rhos.values()))
    report["reducibility"] = cls.name.lower()
    if "end" in data.loops and c != 0.0:
        rho = monodromy(data, data.loop("end"), c, tol=tol)
        report["abs_trace_rho"] = abs(np.trace(rho))
        if c < 0.25:
            law = 2.0 * abs(math.cos(math.pi * lambda_of_c(c)))
            report["trace_law"] = law
            report["trace_law_error"] = abs(report["abs_trace_rho"] - law)
    return report


def cmd_solve(args, parser) -> int:
    _check_tol(parser, args.tol)
    data = _load_data(parser, args.surface)
    _check_c(parser, data, args.c, args.force, need_nonzero=False)
    report = _solve_report(data, args.c, args.tol)
    report.update(_meta(args))
    text = export_json(report, args.out)
    sys.stdout.write(text)
    return 0


def _parse_grid(parser, data, spec):
    if spec is None:
        return default_grid(data)
    try:
        nu, nv = (int(x) for x in spec.lower().split("x"))
    except ValueError:
        parser.error("--grid expects NUxNV, e.g. 24x24")
    base = default_grid(data)
    return GridSpec(base.kind, nu, nv, base.u_range, base.v_range,
                    base.excise)


def cmd_mesh(args, parser) -> int:
    _check_tol(parser, args.tol)
    data = _load_data(parser, args.surface)
    _check_c(parser, data, args.c, args.force, need_nonzero=True)
    grid = _parse_grid(parser, data, args.grid)
    report = _solve_report(data, args.c, args.tol)
    res = unitarize(data, args.c, tol=args.tol)
    mesh = build_fundamental_mesh(data, args.c, grid=grid,
                                  tol=max(args.tol, 1e-10), gauge=res.gauge)
    if args.orbit_depth > 0:
        mesh = reflect_orbit(mesh, data.reflections, args.orbit_depth)
    export_obj(mesh, args.out)
    report["mesh_stats"] = mesh.stats()
    report["mesh_stats"]["orbit_copies"] = \
        len(mesh.provenance.get("orbit_words", [()]))
    if not args.no_ta and "mn" in data.params:
        report["TA_numeric"] = numeric_ta(data, args.c, gauge=res.gauge)
        report["TA_formula"] = total_abs_curvature(data.params["ends"],
                                                   args.c)
    report.update(_meta(args))
    text = export_json(report, args.report)
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# verification suites


def _suite_identities():
    checks = []
    data = wdata.catalog("catenoid")
    c = 3.0 / 16.0
    rho = monodromy(data, data.loop("end"), c, tol=1e-11)
    checks.append(("catenoid trace law at c=3/16",
                   abs(np.trace(rho)) <= 1e-6,
                   "|trace|=%.2e" % abs(np.trace(rho))))

    tri = wdata.catalog("noid(3)")
    worst = 0.0
    for k in range(4):
        z = 0.45 * cmath.exp(2j * math.pi * (k + 0.3) / 4)
        s_g = secondary_schwarzian(tri, z, 0.05)
        s_big = schwarzian(tri.G, z)
        lhs = s_g - s_big
        rhs = 2 * 0.05 * tri.q(z)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    checks.append(("Schwarzian difference equals 2cQ (trinoid)",
                   worst <= 1e-5, "rel=%.2e" % worst))

    worst = 0.0
    for k in range(5):
        z = cmath.exp(complex(0.2 + 0.15 * k, 0.4 * k))
        jet = secondary_gauss(data, z, 0.05)
        ds = (1 + abs(jet.g) ** 2) * abs(jet.omega)
        dsig = jet.dsigma(data.q(z))
        err = abs(ds * ds * dsig - 4 * abs(data.q(z)) ** 2) \
            / (4 * abs(data.q(z)) ** 2)
        worst = max(worst, err)
    checks.append(("metric times pseudometric equals 4|q|^2",
                   worst <= 1e-6, "rel=%.2e" % worst))
    return checks


def _suite_ranges():
    checks = []
    rows = table1_json()["table"]
    frozen = {
        (3, 3): ("-5/16", "3/16", "8", "16"),
        (3, 4): ("-9/64", "7/64", "24", "32"),
        (4, 3): ("-7/36", "5/36", "16", "24"),
        (3, 5): ("-21/400", "19/400", "72", "80"),
        (5, 3): ("-13/144", "11/144", "40", "48"),
    }
    ok = True
    for row in rows:
        want = frozen[(row["m"], row["n"])]
        got = (row["c_range"]["negative"][0], row["c_range"]["positive"][1],
               row["ta_over_pi"]["positive_c"][0],
               row["ta_over_pi"]["negative_c"][1])
        ok = ok and got == want
    checks.append(("five symmetric rows exact", ok, "%d rows" % len(rows)))

    from .genus0 import alpha_of_c, c_range, jm_intervals
    ok = True
    for n in range(3, 11):
        iv = jm_intervals(n)
        (lo, _), (_, hi) = c_range(2, n)
        ok = ok and iv.neg[0] == lo and iv.pos[1] == hi
    checks.append(("interval endpoints match c_range for m=2", ok, "n=3..10"))

    n = 3
    agree = True
    for k in range(60):
        # the wedge angle branch exists for lambda < 2, i.e. c > -3/4
        c = -0.7 + 0.94 * k / 59.0
        if c == 0.0 or c >= 0.24:
            continue
        lam = lambda_of_c(c)
        crit = math.cos(math.pi * lam) + 1 < 2 * math.sin(math.pi / n) ** 2
        alph = abs(alpha_of_c(2, n, c)) < 1
        agree = agree and (crit == alph)
    checks.append(("cos-criterion agrees with |alpha|<1", agree, "60 pts"))
    return checks


def _suite_pipeline():
    checks = []
    tri = wdata.catalog("noid(3)")
    res = unitarize(tri, 0.05)
    rhos = res.rep.rhos
    e1 = frobenius(rhos[(1, 1)] - np.eye(2))
    checks.append(("first mirror pinned to identity", e1 <= 1e-7,
                   "err=%.2e" % e1))
    checks.append(("second mirror eigenvalue unimodular",
                   abs(abs(res.xi) - 1) <= 1e-7,
                   "||xi|-1|=%.2e" % abs(abs(res.xi) - 1)))
    r3 = rhos[(3, 1)]
    off = abs(r3[0, 1] - r3[1, 0])
    checks.append(("third mirror off-diagonal balanced", off <= 1e-6,
                   "diff=%.2e" % off))
    worst = max(frobenius(r @ np.conj(r) - np.eye(2)) for r in rhos.values())
    checks.append(("all mirror matrices close up", worst <= 1e-8,
                   "max=%.2e" % worst))
    cls, _ = classify_commutant(list(rhos.values()))
    checks.append(("representation irreducible", cls.name == "POINT",
                   cls.name.lower()))

    cat = wdata.catalog("catenoid")
    per = wdata.euclid_period(cat, cat.loop("end"))
    re_err = max(abs(p.real) for p in per)
    im_err = abs(per[2].imag - 4 * math.pi)
    checks.append(("catenoid end period is 4 pi i in the last slot",
                   re_err <= 1e-10 and im_err <= 1e-8,
                   "re=%.1e im=%.1e" % (re_err, im_err)))
    return checks


def _suite_mesh():
    import tempfile
    checks = []
    data = wdata.catalog("catenoid")
    mesh = build_fundamental_mesh(data, 0.1)
    worst = 0.0
    for v in mesh.vertices:
        d = np.linalg.det(v.X)
        worst = max(worst, abs(d - 100.0) / 100.0)
    checks.append(("mesh determinants fixed by curvature", worst <= 1e-8,
                   "rel=%.2e" % worst))

    # the chart boundary on the real axis must stay on its mirror plane
    dev = 0.0
    for v, z in zip(mesh.vertices, mesh.domain_uv):
        if abs(z.imag) < 1e-14:
            dev = max(dev, abs(v.X[0, 1].imag))
    checks.append(("boundary row lies on the mirror plane", dev <= 1e-6,
                   "dev=%.2e" % dev))

    tri = wdata.catalog("noid(3)")
    m3 = build_fundamental_mesh(tri, 0.05, max_refine=0, conformal_tol=1.0,
                                grid=GridSpec("polar", 6, 6, (0.0, 1.8),
                                              (-math.pi / 3, 0.0),
                                              tuple((p, 0.12)
                                                    for p in tri.punctures)))
    orb = reflect_orbit(m3, tri.reflections, depth=8)
    n_copies = len(orb.provenance["orbit_words"])
    checks.append(("trinoid orbit closes at 12 copies", n_copies == 12,
                   "%d" % n_copies))

    with tempfile.TemporaryDirectory() as tmp:
        p1 = os.path.join(tmp, "a.obj")
        p2 = os.path.join(tmp, "b.obj")
        t1 = export_obj(m3, p1)
        t2 = export_obj(import_obj(p1), p2)
        checks.append(("re-export of imported OBJ is identical", t1 == t2,
                       "%d bytes" % len(t1)))
    return checks


_SUITES = {
    "identities": _suite_identities,
    "ranges": _suite_ranges,
    "pipeline": _suite_pipeline,
    "mesh": _suite_mesh,
}


def cmd_verify(args) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    for name in names:
        for label, ok, detail in _SUITES[name]():
            print("%s  %-45s %s" % ("PASS" if ok else "FAIL", label, detail))
            failed += 0 if ok else 1
    if failed:
        print("%d check(s) failed" % failed)
        return VERIFY_ERROR
    return 0


def main(argv=None) -> int:
    parser, sub = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)

    # config file values become defaults; explicit flags still win
    if "--config" in argv:
        idx = argv.index("--config")
        try:
            with open(argv[idx + 1]) as fh:
                cfg = json.load(fh)
        except (IndexError, OSError, ValueError) as exc:
            parser.error("cannot read --config: %s" % exc)
        for sp in sub.choices.values():
            sp.set_defaults(**{k.replace("-", "_"): v
                               for k, v in cfg.items()})

    args = parser.parse_args(argv)
    try:
        if args.command == "catalog":
            return cmd_catalog(args)
        if args.command == "ranges":
            return cmd_ranges(args, parser)
        if args.command == "solve":
            return cmd_solve(args, parser)
        if args.command == "mesh":
            return cmd_mesh(args, parser)
        return cmd_verify(args)
    except (CatalogError, DataError, PathError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return USAGE_ERROR
    except CmcForgeError as exc:
        sys.stderr.write("verification failure: %s\n" % exc)
        return VERIFY_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
