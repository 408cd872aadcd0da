"""Closed-form analytics for the genus-zero symmetric families.

A surface piece with wedge angles pi/m and pi/n deforms through curvature
parameter c with end exponent lambda = sqrt(1 - 4c). Everything here is
closed form; range endpoints are kept as exact rationals so tables
reproduce verbatim.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import frobenius, is_su2, mat
from .errors import AccuracyError, BranchError, DataError, NormalizationError

__all__ = [
    "lambda_of_c", "theta_of_c", "alpha_of_c", "c_range", "ends_count",
    "JmIntervals", "jm_intervals", "ExistsResult", "exists_cmc",
    "total_abs_curvature", "sigma_triple", "Table1Row", "table1_rows",
    "format_table1", "table1_json",
]


def _check_mn(m: int, n: int) -> None:
    if int(m) != m or int(n) != n or m < 2 or n < 3:
        raise DataError("need integers m >= 2 and n >= 3")
    if Fraction(1, int(m)) + Fraction(1, int(n)) <= Fraction(1, 2):
        raise DataError("(m, n) = (%d, %d) is not an admissible wedge pair: "
                        "1/m + 1/n must exceed 1/2" % (m, n))


def lambda_of_c(c: float) -> float:
    """End exponent sqrt(1 - 4c) of the deformed family."""
    c = float(c)
    if c >= 0.25:
        raise BranchError("end exponent is real only for c < 1/4")
    return math.sqrt(1.0 - 4.0 * c)


def theta_of_c(m: int, n: int, c: float, step_hint: float = 1e-3) -> float:
    """Continuous branch of cos(m theta) = cos(pi lambda), theta(0) = pi/m.

    The cosine relation is m-to-one; the branch is selected by numeric
    continuation from c = 0 with steps min(1e-3, |c|/50), then cross-checked
    against the closed form (2 pi - pi lambda)/m.
    """
    _check_mn(m, n)
    c = float(c)
    lam = lambda_of_c(c)
    phi = math.pi  # phi = m theta, starts at pi where lambda = 1
    if c != 0.0:
        dc = min(step_hint, abs(c) / 50.0)
        steps = max(1, math.ceil(abs(c) / dc))
        t_prev = 0.0
        for k in range(1, steps + 1):
            t = c * k / steps
            # implicit derivative of cos(phi) = cos(pi lambda) on the branch
            # through phi(0) = pi: d phi / dc = 2 pi / lambda
            pred = phi + (2.0 * math.pi / lambda_of_c(t_prev)) * (t - t_prev)
            x = max(-1.0, min(1.0, math.cos(math.pi * lambda_of_c(t))))
            y = math.acos(x)
            best = None
            j0 = round((pred - y) / (2 * math.pi))
            for base in (y, -y):
                for j in (j0 - 1, j0, j0 + 1):
                    cand = base + 2 * math.pi * j
                    if best is None or abs(cand - pred) < abs(best - pred):
                        best = cand
            phi = best
            t_prev = t
    theta = phi / m
    closed = (2.0 * math.pi - math.pi * lam) / m
    if abs(theta - closed) > 1e-9:
        raise AccuracyError("branch tracking drifted from the continuous "
                            "branch: %.12f vs %.12f" % (theta, closed))
    if not 0.0 < theta < math.pi:
        raise BranchError("wedge angle branch left (0, pi) at c = %g" % c)
    if abs(math.cos(m * theta) - math.cos(math.pi * lam)) > 1e-12:
        raise AccuracyError("cos(m theta) fails to match cos(pi lambda)")
    return theta


def alpha_of_c(m: int, n: int, c: float) -> float:
    """cos(theta(c)) / sin(pi/n); equals cos(pi/m)/sin(pi/n) at c = 0."""
    return math.cos(theta_of_c(m, n, c)) / math.sin(math.pi / n)


def c_range(m: int, n: int):
    """Certified curvature intervals, exact: (negative, positive) pair.

    Negative side (-(1/4)[(2 - m/2 + m/n)^2 - 1], 0), positive side
    (0, (1/4)[1 - (m/2 - m/n)^2]).
    """
    _check_mn(m, n)
    half_m = Fraction(int(m), 2)
    ratio = Fraction(int(m), int(n))
    low = -((2 - half_m + ratio) ** 2 - 1) / 4
    high = (1 - (half_m - ratio) ** 2) / 4
    if low >= 0 or high <= 0:
        raise DataError("empty curvature range for (m, n) = (%d, %d)" % (m, n))
    return (low, Fraction(0)), (Fraction(0), high)


def ends_count(m: int, n: int) -> int:
    """Number of ends of the symmetric surface with wedge pair (m, n)."""
    _check_mn(m, n)
    N = 2 / (1 + Fraction(int(m), int(n)) - Fraction(int(m), 2))
    if N.denominator != 1:
        raise DataError("wedge pair (%d, %d) has no integral end count" % (m, n))
    return int(N)


@dataclass(frozen=True)
class JmIntervals:
    """Exact intervals of the two-ended comparison criterion.

    neg and pos are the k = 0 intervals around the origin; higher[k-1] is
    the k-th interval (-(k+1/n)(k+1+1/n), (k-1/n)(k+1-1/n)).
    """

    n: int
    neg: tuple
    pos: tuple
    higher: tuple

    def all_intervals(self):
        return (self.neg, self.pos) + self.higher


def jm_intervals(n: int, kmax: int = 3) -> JmIntervals:
    if n < 3:
        raise DataError("need n >= 3")
    n = int(n)
    neg = (Fraction(-(n + 1), n * n), Fraction(0))
    pos = (Fraction(0), Fraction(n - 1, n * n))
    inv = Fraction(1, n)
    higher = tuple(
        (-(k + inv) * (k + 1 + inv), (k - inv) * (k + 1 - inv))
        for k in range(1, int(kmax) + 1)
    )
    return JmIntervals(n, neg, pos, higher)


@dataclass(frozen=True)
class ExistsResult:
    """Boolean existence answer plus a provenance flag.

    flag is None inside the certified range, "beyond-theorem" when only the
    eigenvalue criterion |alpha| < 1 supports existence, "degenerate" for
    the minimal case c = 0, and "undetermined" when the branch tracking
    fails before reaching c.
    """

    exists: bool
    flag: str | None = None
    alpha: float | None = None

    def __bool__(self) -> bool:
        return self.exists


def exists_cmc(m: int, n: int, c: float) -> ExistsResult:
    """Whether the (m, n) family admits the curvature value c.

    The working criterion is |alpha(c)| < 1 along the continuous branch,
    which is exactly the unitarizability condition of the third mirror.
    """
    _check_mn(m, n)
    c = float(c)
    if c >= 0.25:
        raise BranchError("curvature must satisfy c < 1/4")
    if c == 0.0:
        return ExistsResult(True, "degenerate", alpha_of_c(m, n, 0.0))
    try:
        a = alpha_of_c(m, n, c)
    except BranchError:
        return ExistsResult(False, "undetermined", None)
    if not abs(a) < 1.0:
        return ExistsResult(False, None, a)
    (lo, _), (_, hi) = c_range(m, n)
    inside = float(lo) < c < float(hi)
    return ExistsResult(True, None if inside else "beyond-theorem", a)


def total_abs_curvature(N: int, c: float) -> float:
    """2 pi [N (lambda - 1) + 2N - 2] with lambda = sqrt(1 - 4c)."""
    if N < 2:
        raise DataError("need at least two ends")
    lam = lambda_of_c(c)
    return 2.0 * math.pi * (N * (lam - 1.0) + 2 * N - 2)


def sigma_triple(m: int, n: int):
    """SU(2) mirror triple of the degenerate (c = 0) symmetric surface.

    sigma1 = I, sigma2 = diag(e^{i pi/n}, e^{-i pi/n}), and
    sigma3 = i [[a0 e^{i pi/n}, b0], [b0, -a0 e^{-i pi/n}]] with
    a0 = cos(pi/m)/sin(pi/n), b0 = sqrt(1 - a0^2). The triple satisfies
    sigma conj(sigma) = I for each member and (sigma2 conj(sigma3))^2 = -I.
    The spin sign of sigma3 is fixed by this matrix; its eigenvalue pair is
    the pair e^{+-i pi/m} up to that common sign.
    """
    _check_mn(m, n)
    a0 = math.cos(math.pi / m) / math.sin(math.pi / n)
    if a0 * a0 > 1.0:
        raise DataError("wedge pair (%d, %d) has no unit mirror triple" % (m, n))
    b0 = math.sqrt(1.0 - a0 * a0)
    w = cmath.exp(1j * math.pi / n)
    s1 = np.eye(2, dtype=complex)
    s2 = mat(w, 0.0, 0.0, np.conj(w))
    s3 = 1j * mat(a0 * w, b0, b0, -a0 * np.conj(w))
    for s in (s1, s2, s3):
        if not is_su2(s, 1e-12):
            raise NormalizationError("mirror triple member left SU(2)")
        if frobenius(s @ np.conj(s) - np.eye(2)) > 1e-12:
            raise NormalizationError("mirror triple member fails s conj(s) = I")
    word = s2 @ np.conj(s3)
    if frobenius(word @ word + np.eye(2)) > 1e-12:
        raise NormalizationError("mirror triple fails the wedge relation "
                                 "(sigma2 conj(sigma3))^2 = -I")
    return s1, s2, s3


# ---------------------------------------------------------------------------
# Table of certified ranges for the five Platonic symmetry families


@dataclass(frozen=True)
class Table1Row:
    symmetry: str
    ends: int
    m: int
    n: int
    c_neg: tuple
    c_pos: tuple
    ta_neg: tuple     # multiples of pi, exact
    ta_pos: tuple


_TABLE_FAMILIES = (
    ("Tetrahedra", 3, 3),
    ("Hexahedra", 3, 4),
    ("Octahedra", 4, 3),
    ("Dodecahedra", 3, 5),
    ("Icosahedra", 5, 3),
)


def _ta_over_pi(N: int, lam: Fraction) -> Fraction:
    return 2 * (N * lam + N - 2)


def table1_rows():
    """The five Platonic rows: exact c ranges and total-curvature ranges.

    TA intervals are reported as exact multiples of pi; lambda at the range
    endpoints is rational because 1 - 4c is a perfect square there.
    """
    rows = []
    for name, m, n in _TABLE_FAMILIES:
        N = ends_count(m, n)
        (lo, _), (_, hi) = c_range(m, n)
        lam_hi = 2 - Fraction(m, 2) + Fraction(m, n)   # lambda at c = lo
        lam_lo = abs(Fraction(m, 2) - Fraction(m, n))  # lambda at c = hi
        center = _ta_over_pi(N, Fraction(1))
        rows.append(Table1Row(
            name, N, m, n, (lo, Fraction(0)), (Fraction(0), hi),
            ta_neg=(center, _ta_over_pi(N, lam_hi)),
            ta_pos=(_ta_over_pi(N, lam_lo), center),
        ))
    return tuple(rows)


def _frac(x: Fraction) -> str:
    return str(x)


def format_table1() -> str:
    rows = table1_rows()
    header = ("Symmetry", "Ends", "m", "n", "Range of c", "Range of TA / pi")
    body = []
    for r in rows:
        crange = "(%s, 0) u (0, %s)" % (_frac(r.c_neg[0]), _frac(r.c_pos[1]))
        tarange = "(%s, %s) u (%s, %s)" % (
            _frac(r.ta_pos[0]), _frac(r.ta_pos[1]),
            _frac(r.ta_neg[0]), _frac(r.ta_neg[1]))
        body.append((r.symmetry, str(r.ends), str(r.m), str(r.n),
                     crange, tarange))
    widths = [max(len(h), *(len(b[i]) for b in body))
              for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for b in body:
        lines.append("  ".join(s.ljust(w) for s, w in zip(b, widths)).rstrip())
    return "\n".join(lines)


def table1_json() -> dict:
    rows = []
    for r in table1_rows():
        rows.append({
            "symmetry": r.symmetry,
            "ends": r.ends,
            "m": r.m,
            "n": r.n,
            "c_range": {
                "negative": [str(r.c_neg[0]), str(r.c_neg[1])],
                "positive": [str(r.c_pos[0]), str(r.c_pos[1])],
            },
            "ta_over_pi": {
                "positive_c": [str(r.ta_pos[0]), str(r.ta_pos[1])],
                "negative_c": [str(r.ta_neg[0]), str(r.ta_neg[1])],
            },
        })
    return {"schema": "v1", "table": rows}


def range_report(m: int, n: int) -> dict:
    """Exact c and total-curvature ranges for one (m, n) wedge family.

    Same content as a Table-1 row but for any admissible pair; fractions
    are returned as strings, TA entries as exact multiples of pi.
    """
    N = ends_count(m, n)
    (lo, _), (_, hi) = c_range(m, n)
    lam_hi = 2 - Fraction(m, 2) + Fraction(m, n)
    lam_lo = abs(Fraction(m, 2) - Fraction(m, n))
    center = _ta_over_pi(N, Fraction(1))
    return {
        "m": m,
        "n": n,
        "ends": N,
        "c_range": {"negative": [str(lo), "0"], "positive": ["0", str(hi)]},
        "ta_over_pi": {
            "positive_c": [str(_ta_over_pi(N, lam_lo)), str(center)],
            "negative_c": [str(center), str(_ta_over_pi(N, lam_hi))],
        },
    }
