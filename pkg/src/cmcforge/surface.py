"""Surface assembly: fundamental meshes, reflection orbits, exports.

Points live in the Hermitian model X = (1/c) F F* with det X = 1/c^2;
ball coordinates (radius 1/|c|) are used for export and deduplication.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (BallPoint, HermitianPoint, adj2, frobenius,
                      hyperbolic_distance, inv2, mat, to_ball)
from .errors import AccuracyError, DataError, PathError
from .nullcurve import integrate, secondary_gauss
from .paths import PolyPath, contour_integral
from .periodkill import unitarize
from .wdata import WeierstrassData

__all__ = [
    "GridSpec", "SurfaceMesh", "build_fundamental_mesh", "minimal_mesh_points",
    "reflect_orbit", "numeric_ta", "export_obj", "import_obj", "export_json",
    "default_grid",
]


@dataclass(frozen=True)
class GridSpec:
    """Chart grid: polar maps (u, v) to exp(u + iv), rect to u + iv."""

    kind: str
    nu: int
    nv: int
    u_range: tuple
    v_range: tuple
    excise: tuple = ()          # (center, radius) chart disks to drop

    def node(self, u: float, v: float) -> complex:
        if self.kind == "polar":
            return cmath.exp(complex(u, v))
        return complex(u, v)


def default_grid(data: WeierstrassData, nu: int = 16, nv: int = 16) -> GridSpec:
    name = data.name
    if name == "catenoid":
        return GridSpec("polar", nu, nv, (0.0, 1.5), (0.0, math.pi / 2))
    if name.startswith("noid("):
        n = data.params["mn"][1]
        exc = tuple((p, 0.12) for p in data.punctures)
        return GridSpec("polar", nu, nv, (0.0, 1.8), (-math.pi / n, 0.0),
                        excise=exc)
    if name == "enneper":
        return GridSpec("rect", nu, nv, (0.0, 1.0), (0.0, 1.0))
    raise DataError("no default grid for %r; pass a GridSpec" % name)


@dataclass
class SurfaceMesh:
    vertices: list                 # HermitianPoint
    faces: list                    # (i, j, k) indices
    domain_uv: list                # chart point per vertex (complex)
    provenance: dict = field(default_factory=dict)

    def ball_vertices(self) -> np.ndarray:
        out = np.empty((len(self.vertices), 3))
        for i, v in enumerate(self.vertices):
            out[i] = to_ball(v).y
        return out

    def stats(self) -> dict:
        return {"vertices": len(self.vertices), "faces": len(self.faces)}


def _node_excised(z: complex, grid: GridSpec) -> bool:
    return any(abs(z - c) <= r for c, r in grid.excise)


def resolve_gauge(data: WeierstrassData, c: float, gauge, tol: float = 1e-10):
    """Constant frame gauge that closes the surface.

    The basepoint-normalized frame has non-unitary deck transformations;
    multiplying F by the period-killing gauge makes every mirror matrix
    special unitary, so points, metric densities and mirror copies become
    single-valued on the quotient. gauge="auto" computes it, None skips it,
    a 2x2 array is used as given.
    """
    if gauge is None:
        return np.eye(2, dtype=complex)
    if isinstance(gauge, str):
        if gauge != "auto":
            raise DataError("gauge must be None, 'auto' or a 2x2 matrix")
        if not data.reflections:
            return np.eye(2, dtype=complex)
        return unitarize(data, c, tol=tol).gauge
    return np.asarray(gauge, dtype=complex)


def _anchor_hop(data: WeierstrassData, grid: GridSpec, target: complex):
    """Waypoints from the basepoint to the anchor node of the grid.

    Polar grids walk an arc at the basepoint radius first, then move
    radially outward, which keeps the hop clear of unit-circle punctures.
    """
    z0 = data.basepoint
    if target == z0:
        return None
    if grid.kind != "polar" or z0 == 0:
        return PolyPath((z0, target))
    phase0 = cmath.phase(z0)
    phase1 = cmath.phase(target)
    pts = [z0]
    if phase1 != phase0:
        steps = max(1, int(abs(phase1 - phase0) / 0.5))
        for k in range(1, steps + 1):
            ph = phase0 + (phase1 - phase0) * k / steps
            pts.append(abs(z0) * cmath.exp(1j * ph))
    if pts[-1] != target:
        pts.append(target)
    return PolyPath(tuple(pts))


def _chain_frames(data: WeierstrassData, c: float, grid: GridSpec, tol: float):
    """Frames on all grid nodes, integrated along arcs and rays of the grid.

    Returns (nodes, frames) as (nu+1) x (nv+1) arrays; nodes in an excised
    disk (and nodes behind one along a column) carry None. Polar chart rays
    are straight chords, so chaining along them stays in the wedge.
    """
    us = np.linspace(grid.u_range[0], grid.u_range[1], grid.nu + 1)
    vs = np.linspace(grid.v_range[0], grid.v_range[1], grid.nv + 1)
    nodes = [[grid.node(u, v) for v in vs] for u in us]
    frames = [[None] * (grid.nv + 1) for _ in range(grid.nu + 1)]

    # anchor on the row farthest from the punctures, then walk each
    # column from there toward the other end
    anchor = grid.nu if grid.kind == "polar" else 0
    hop = _anchor_hop(data, grid, nodes[anchor][0])
    F = np.eye(2, dtype=complex) if hop is None else \
        integrate(data, hop, c, tol, clearance=False).F
    frames[anchor][0] = F
    for j in range(1, grid.nv + 1):
        if _node_excised(nodes[anchor][j], grid):
            raise PathError("anchor row of the grid meets an excised disk")
        F = integrate(data, PolyPath((nodes[anchor][j - 1], nodes[anchor][j])),
                      c, tol, F0=F, clearance=False).F
        frames[anchor][j] = F
    direction = -1 if anchor else 1
    for j in range(grid.nv + 1):
        F = frames[anchor][j]
        i = anchor + direction
        while 0 <= i <= grid.nu:
            if _node_excised(nodes[i][j], grid):
                break
            F = integrate(data, PolyPath((nodes[i - direction][j],
                                          nodes[i][j])),
                          c, tol, F0=F, clearance=False).F
            frames[i][j] = F
            i += direction
    return us, vs, nodes, frames


def _collect_mesh(data, c, grid, nodes, frames):
    index = {}
    vertices, uv = [], []
    nu, nv = grid.nu, grid.nv
    for i in range(nu + 1):
        for j in range(nv + 1):
            z = nodes[i][j]
            F = frames[i][j]
            if F is None:
                continue
            X = (F @ np.conj(F).T) / c
            vertices.append(HermitianPoint(X, c))
            uv.append(z)
            index[(i, j)] = len(vertices) - 1
    faces = []
    for i in range(nu):
        for j in range(nv):
            quad = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            if any(k not in index for k in quad):
                continue
            a, b, cc, d = (index[k] for k in quad)
            faces.append((a, b, cc))
            faces.append((a, cc, d))
    return vertices, faces, uv


def _conformality_error(data, c, grid, nodes, frames) -> float:
    """Worst relative mismatch of mesh edge lengths against the first
    fundamental form (1+|g|^2)^2 |omega|^2 on interior cells."""
    nu, nv = grid.nu, grid.nv
    worst = 0.0
    step_i = max(1, nu // 6)
    step_j = max(1, nv // 6)
    for i in range(1, nu, step_i):
        for j in range(1, nv, step_j):
            z = nodes[i][j]
            F = frames[i][j]
            Fb = frames[i + 1][j]
            if F is None or Fb is None:
                continue
            # the trapezoid comparison needs the density scale length to
            # exceed the edge; near an excised end the margin shrinks with
            # the grid, so coverage grows under refinement
            edge = abs(nodes[i + 1][j] - z)
            if any(min(abs(z - ctr), abs(nodes[i + 1][j] - ctr)) < r + 2 * edge
                   for ctr, r in grid.excise):
                continue
            jet_a = secondary_gauss(data, z, c, F=F)
            jet_b = secondary_gauss(data, nodes[i + 1][j], c, F=Fb)
            dens = 0.5 * ((1.0 + abs(jet_a.g) ** 2) * abs(jet_a.omega)
                          + (1.0 + abs(jet_b.g) ** 2) * abs(jet_b.omega))
            dz = abs(nodes[i + 1][j] - z)
            if dens == 0.0 or dz == 0.0:
                continue
            Xa = HermitianPoint((F @ np.conj(F).T) / c, c)
            Xb = HermitianPoint((Fb @ np.conj(Fb).T) / c, c)
            ratio = hyperbolic_distance(Xa, Xb) / (dens * dz)
            worst = max(worst, abs(ratio - 1.0))
    return worst


def build_fundamental_mesh(data: WeierstrassData, c: float,
                           grid: GridSpec | None = None, tol: float = 1e-9,
                           conformal_tol: float = 0.02,
                           max_refine: int = 2, gauge="auto") -> SurfaceMesh:
    """Mesh of one fundamental piece, vertices X = (1/c) F F*.

    Frames carry the period-killing gauge (see resolve_gauge), so mirror
    copies of the mesh join seamlessly. The grid is refined (both
    directions doubled) until sampled edge lengths match the first
    fundamental form within conformal_tol; the check is second order in
    the cell size, so one refinement usually suffices. Raises
    AccuracyError when the budget is exhausted.
    """
    c = float(c)
    if c == 0.0:
        raise DataError("the Hermitian model needs c != 0; for the minimal "
                        "limit use minimal_mesh_points")
    if grid is None:
        grid = default_grid(data)
    a = resolve_gauge(data, c, gauge, tol=min(tol, 1e-10))
    last_err = None
    for _ in range(max_refine + 1):
        us, vs, nodes, frames = _chain_frames(data, c, grid, tol)
        for row in frames:
            for j, F in enumerate(row):
                if F is not None:
                    row[j] = F @ a
        err = _conformality_error(data, c, grid, nodes, frames)
        if err <= conformal_tol:
            vertices, faces, uv = _collect_mesh(data, c, grid, nodes, frames)
            mesh = SurfaceMesh(vertices, faces, uv,
                               provenance={"surface": data.name, "c": c,
                                           "grid": (grid.nu, grid.nv),
                                           "orbit_words": [()]})
            return mesh
        last_err = err
        grid = GridSpec(grid.kind, grid.nu * 2, grid.nv * 2,
                        grid.u_range, grid.v_range, grid.excise)
    raise AccuracyError("conformality check failed after refinement "
                        "(edge mismatch %.3e)" % last_err)


def minimal_mesh_points(data: WeierstrassData, grid: GridSpec,
                        epsabs: float = 1e-11):
    """Minimal-immersion values on the same chart grid (the c -> 0 limit).

    Walks the grid exactly like the frame chaining. Returns (chart nodes,
    xyz array); entries of excised or unreachable nodes are NaN.
    """
    us = np.linspace(grid.u_range[0], grid.u_range[1], grid.nu + 1)
    vs = np.linspace(grid.v_range[0], grid.v_range[1], grid.nv + 1)
    nodes = [[grid.node(u, v) for v in vs] for u in us]
    ent = data.alpha
    vals = np.full((grid.nu + 1, grid.nv + 1, 3), np.nan)

    def path_val(path):
        return np.asarray(contour_integral(
            lambda z: ent.weierstrass(z), path,
            epsabs=epsabs, components=3), dtype=complex).real

    anchor = grid.nu if grid.kind == "polar" else 0
    hop = _anchor_hop(data, grid, nodes[anchor][0])
    acc = np.zeros(3) if hop is None else path_val(hop)
    vals[anchor][0] = acc
    for j in range(1, grid.nv + 1):
        acc = acc + path_val(PolyPath((nodes[anchor][j - 1],
                                       nodes[anchor][j])))
        vals[anchor][j] = acc
    direction = -1 if anchor else 1
    for j in range(grid.nv + 1):
        acc = vals[anchor][j].copy()
        i = anchor + direction
        while 0 <= i <= grid.nu:
            if _node_excised(nodes[i][j], grid):
                break
            acc = acc + path_val(PolyPath((nodes[i - direction][j],
                                           nodes[i][j])))
            vals[i][j] = acc
            i += direction
    return nodes, vals


# ---------------------------------------------------------------------------
# reflection orbit


def _orbit_generators(reflections):
    gens = []
    for r in reflections:
        sigma = np.asarray(r.sigma, dtype=complex)
        gens.append((tuple(r.label), inv2(np.conj(sigma))))
    return gens


def _apply_element(A, parity, X):
    Y = np.conj(X) if parity else X
    return A @ Y @ np.conj(A).T


def reflect_orbit(mesh: SurfaceMesh, reflections, depth: int) -> SurfaceMesh:
    """Tile the surface by mirror words up to the given depth.

    Each mirror acts on points by X -> conj(sigma^-1 X sigma^-*); copies
    whose vertex sets already occur (within 1e-8 in ball coordinates) are
    dropped, which realizes the wedge relations of the mirror arrangement
    empirically. Odd words reverse face orientation.
    """
    if depth <= 0 or not mesh.vertices:
        return mesh
    c = mesh.vertices[0].c
    gens = _orbit_generators(reflections)
    probe_idx = sorted({0, len(mesh.vertices) // 2, len(mesh.vertices) - 1})
    probes = [np.asarray(mesh.vertices[i].X, dtype=complex) for i in probe_idx]

    def signature(A, parity):
        out = []
        for P in probes:
            Y = _apply_element(A, parity, P)
            out.extend(to_ball(HermitianPoint(Y, c)).y)
        return np.asarray(out)

    seen = [signature(np.eye(2, dtype=complex), 0)]
    elements = [(np.eye(2, dtype=complex), 0, ())]
    frontier = [(np.eye(2, dtype=complex), 0, ())]
    for _ in range(depth):
        new_frontier = []
        for A, parity, word in frontier:
            for label, B in gens:
                A2 = B @ np.conj(A)
                p2 = 1 - parity
                w2 = word + (label,)
                sig = signature(A2, p2)
                if any(np.max(np.abs(sig - s)) <= 1e-8 for s in seen):
                    continue
                seen.append(sig)
                elements.append((A2, p2, w2))
                new_frontier.append((A2, p2, w2))
        frontier = new_frontier
        if not frontier:
            break

    vertices, faces, uv, words = [], [], [], []
    for A, parity, word in elements:
        offset = len(vertices)
        for v in mesh.vertices:
            Y = _apply_element(A, parity, np.asarray(v.X, dtype=complex))
            vertices.append(HermitianPoint(Y, c))
        uv.extend(mesh.domain_uv)
        for f in mesh.faces:
            if parity:
                faces.append((f[0] + offset, f[2] + offset, f[1] + offset))
            else:
                faces.append(tuple(i + offset for i in f))
        words.append(word)
    prov = dict(mesh.provenance)
    prov["orbit_words"] = words
    return SurfaceMesh(vertices, faces, uv, prov)


# ---------------------------------------------------------------------------
# total absolute curvature quadrature


def _gauss_panels(a: float, b: float, edges, npts: int):
    """Composite Gauss-Legendre nodes/weights on [a, b] split at edges."""
    xs, ws = np.polynomial.legendre.leggauss(npts)
    cuts = [a] + [e for e in edges if a < e < b] + [b]
    nodes, weights = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes.extend(mid + half * xs)
        weights.extend(half * ws)
    return np.asarray(nodes), np.asarray(weights)


def _ta_line(data, c, gauge, theta, u_nodes, u_weights, F_top, u_top, tol):
    """Pullback density integrated down one chart ray theta = const.

    F_top is the frame at exp(u_top + i theta); the walk descends through
    the quadrature nodes, which keeps the ray clear of unit-circle
    punctures (closest approach is the corner excision scale).
    """
    order = np.argsort(u_nodes)[::-1]
    total = 0.0
    F = F_top
    prev = cmath.exp(complex(u_top, theta))
    for k in order:
        z = cmath.exp(complex(u_nodes[k], theta))
        if z != prev:
            F = integrate(data, PolyPath((prev, z)), c, tol, F0=F,
                          clearance=False).F
            prev = z
        jet = secondary_gauss(data, z, c, F=F @ gauge)
        total += u_weights[k] * jet.dsigma(data.q(z)) * abs(z) ** 2
    return total


def _ta_quadrature(data, c, gauge, u_max, corner, tol, n_theta, n_u):
    m, nsym = data.params["mn"]
    wedge = math.pi / nsym if data.name.startswith("noid") else math.pi / 2
    factor = data.params["orbit_factor"]
    delta = corner
    u_edges = [2 * delta, 0.1, 0.3, 0.7, 1.5, 3.0]
    if data.name.startswith("noid"):
        # corner square [0, delta] x [-delta, 0] around the end is excised
        regions = [
            ((delta, u_max), (-wedge, 0.0), [-0.1, -2 * delta]),
            ((0.0, delta), (-wedge, -delta), [-0.1, -2 * delta]),
        ]
    else:
        regions = [((0.0, u_max), (0.0, wedge), [])]

    # frames at the outer arc radius, chained over sorted theta nodes
    lines = []
    for ridx, ((ua, ub), (va, vb), v_edges) in enumerate(regions):
        tn, tw = _gauss_panels(va, vb, v_edges, n_theta)
        un, uw = _gauss_panels(ua, ub, u_edges, n_u)
        for th, w_th in zip(tn, tw):
            lines.append((th, w_th, un, uw))
    lines.sort(key=lambda t: t[0])

    th0 = lines[0][0]
    hop = [data.basepoint]
    r0, ph0 = abs(data.basepoint), cmath.phase(data.basepoint)
    steps = max(1, int(abs(th0 - ph0) / 0.5))
    if th0 != ph0:
        hop.extend(r0 * cmath.exp(1j * (ph0 + (th0 - ph0) * k / steps))
                   for k in range(1, steps + 1))
    hop.append(cmath.exp(complex(u_max, th0)))
    F_arc = integrate(data, PolyPath(tuple(hop)), c, tol, clearance=False).F

    total = 0.0
    th_prev = th0
    for th, w_th, un, uw in lines:
        if th != th_prev:
            F_arc = integrate(data, PolyPath((cmath.exp(complex(u_max, th_prev)),
                                              cmath.exp(complex(u_max, th)))),
                              c, tol, F0=F_arc, clearance=False).F
            th_prev = th
        total += w_th * _ta_line(data, c, gauge, th, un, uw, F_arc, u_max, tol)
    return factor * total


def numeric_ta(data: WeierstrassData, c: float, u_max: float = 6.0,
               corner: float = 0.02, tol: float = 1e-8, n_theta: int = 10,
               n_u: int = 10, check: bool = True, gauge="auto") -> float:
    """Total absolute curvature by quadrature of the pullback density.

    Integrates 4|g'|^2/(1+|g|^2)^2 (in its pole-safe form) over one
    fundamental wedge in log-polar coordinates and multiplies by the orbit
    size. The frame carries the period-killing gauge, without which the
    density is not single-valued on the quotient. A corner square at an
    end puncture is excised and rays stop at u_max; both biases are far
    below the quadrature target. With check=True a coarser pass must agree
    within 1.5 percent.
    """
    if "mn" not in data.params or "orbit_factor" not in data.params:
        raise DataError("numeric_ta needs wedge metadata (mn, orbit_factor)")
    a = resolve_gauge(data, c, gauge, tol=min(tol, 1e-10))
    value = _ta_quadrature(data, c, a, u_max, corner, tol, n_theta, n_u)
    if check:
        coarse = _ta_quadrature(data, c, a, u_max, corner, tol,
                                max(4, n_theta - 4), max(4, n_u - 4))
        if abs(coarse - value) > 0.015 * abs(value):
            raise AccuracyError(
                "curvature quadrature has not converged: %.6f vs %.6f"
                % (value, coarse))
    return value


# ---------------------------------------------------------------------------
# exports


@dataclass(frozen=True)
class ImportedMesh:
    ball: np.ndarray
    faces: tuple
    header: dict


def export_obj(mesh, path) -> str:
    """ASCII OBJ in ball coordinates; byte-deterministic for equal input."""
    lines = []
    if isinstance(mesh, ImportedMesh):
        header = mesh.header
        verts = mesh.ball
        faces = mesh.faces
    else:
        header = {"surface": mesh.provenance.get("surface", "unnamed"),
                  "c": repr(float(mesh.vertices[0].c)) if mesh.vertices else "0"}
        verts = mesh.ball_vertices()
        faces = mesh.faces
    lines.append("# cmcforge mesh")
    for k in sorted(header):
        lines.append("# %s=%s" % (k, header[k]))
    for v in verts:
        lines.append("v %.17g %.17g %.17g" % (v[0], v[1], v[2]))
    for f in faces:
        lines.append("f %d %d %d" % (f[0] + 1, f[1] + 1, f[2] + 1))
    text = "\n".join(lines) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text


def import_obj(path) -> ImportedMesh:
    header = {}
    verts = []
    faces = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("# ") and "=" in line:
                k, _, v = line[2:].partition("=")
                header[k] = v
            elif line.startswith("v "):
                verts.append([float(x) for x in line.split()[1:4]])
            elif line.startswith("f "):
                faces.append(tuple(int(x) - 1 for x in line.split()[1:4]))
    return ImportedMesh(np.asarray(verts, dtype=float), tuple(faces), header)


def export_json(report: dict, path=None) -> str:
    doc = dict(report)
    doc.setdefault("schema", "v1")
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
