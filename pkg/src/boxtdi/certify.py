"""Decision procedures for box-integrality and box-TDIness, with certificates.

``is_box_tdi`` tests every face-defining matrix for equimodularity and returns
either the normalized TU matrices or the first failing face.  ``is_box_integer``
is an independent brute-force oracle: every vertex of ``P`` intersected with an
integer box is a vertex of ``P`` with some coordinates fixed to integers, so it
suffices to solve all nonsingular systems ``A_J x = b_J, x_I = p``.  Systems
whose determinant is +-1 can only produce integer points and are skipped.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exactalg import RatMatrix, int_det, inverse, lcm_denominators, row_basis
from .matprops import (
    EquimodularVerdict,
    first_nonintegral_basis,
    is_equimodular,
    normalized,
)
from .polyhedra import (
    EmptyPolyhedronError,
    Face,
    HPolyhedron,
    box_intersect,
    dilate,
    h_to_v,
    is_integer,
    lin_space_basis,
    minimal_faces,
    minimal_integer_dilation,
    pm_lift,
    polar,
    tangent_cone,
)

DEFAULT_WINDOW = 4
DEFAULT_SAMPLES = 64
DEFAULT_K_FACTOR = 64


@dataclass(frozen=True)
class FractionalVertexWitness:
    """A noninteger vertex of ``kP`` intersected with the box ``[l, u]``.

    Bounds are integers or None (unbounded side).
    """

    k: int
    l: tuple
    u: tuple
    vertex: tuple

    def validate(self, P: HPolyhedron) -> bool:
        Q = box_intersect(dilate(P, self.k), self.l, self.u)
        V = h_to_v(Q)
        return self.vertex in V.vertices and any(x.denominator != 1 for x in self.vertex)


@dataclass(frozen=True)
class BoxIntegerVerdict:
    is_box_integer: bool
    witness: Optional[FractionalVertexWitness] = None
    exact: bool = True  # False: a window-limited "true" on unbounded input
    systems_checked: int = field(default=0, compare=False)

    def __bool__(self) -> bool:
        return self.is_box_integer


@dataclass(frozen=True)
class Refutation:
    face: Face
    fdm: RatMatrix
    pair: tuple  # ((cols1, det1), (cols2, det2))


@dataclass(frozen=True)
class BoxTDICertificate:
    verdict: bool
    per_face_witnesses: tuple = ()  # (Face, TU matrix) pairs
    refutation: Optional[Refutation] = None
    cross_checked: bool = False

    def __bool__(self) -> bool:
        return self.verdict


# ---------------------------------------------------------------------------
# brute-force box-integrality


def _coordinate_ranges(P: HPolyhedron, window: int) -> Optional[list[tuple[int, int]]]:
    V = P.vrep
    ranges = []
    for i in range(P.n):
        lo = math.ceil(min(v[i] for v in V.vertices))
        hi = math.floor(max(v[i] for v in V.vertices))
        if any(g[i] for g in itertools.chain(V.rays, V.lineality)):
            lo, hi = math.floor(min(v[i] for v in V.vertices)) - window, math.ceil(max(v[i] for v in V.vertices)) + window
        ranges.append((lo, hi))
    return ranges


def _adjugate(B: list[list[int]]) -> tuple[list[list[int]], int]:
    d = int_det(B)
    if d == 0:
        return [], 0
    inv = inverse(RatMatrix(B))
    adj = [[int(x * d) for x in r] for r in inv.row_tuples()]
    return adj, d


def _scan_system(rows, rhs, J, I, N, ranges):
    """Fractional vertex of {A_J x = b_J, x_I = p} inside P, or None."""
    AJN = [[rows[j][c] for c in N] for j in J]
    if N:
        adj, delta = _adjugate(AJN)
        if delta == 0:
            return None, 0
    else:
        adj, delta = [], 1
    if abs(delta) == 1:
        return None, 0
    if delta < 0:
        adj = [[-x for x in r] for r in adj]
        delta = -delta
    # x_N = (adj b_J - adj A_JI p) / delta
    base = [sum(a * rhs[j] for a, j in zip(r, J)) for r in adj]
    lin = [[sum(a * rows[j][c] for a, j in zip(r, J)) for c in I] for r in adj]
    grids = [range(ranges[c][0], ranges[c][1] + 1) for c in I]
    size = 1
    for g in grids:
        size *= len(g)
    if size == 0:
        return None, 0
    pts = np.array(list(itertools.product(*grids)), dtype=object).reshape(size, len(I))
    mag = max([abs(x) for x in base] + [abs(x) for r in lin for x in r] + [1])
    pmax = max([abs(x) for rg in ranges for x in rg] + [1])
    big = mag * pmax * (len(I) + 1) * max(abs(x) for r in rows for x in r + [1]) * (len(N) + 1) * delta
    dtype = np.int64 if big < 2**60 else object
    pts = pts.astype(dtype)
    base_a = np.array(base, dtype=dtype)
    lin_a = np.array(lin, dtype=dtype).reshape(len(N), len(I))
    num = base_a[None, :] - pts @ lin_a.T  # (size, |N|)
    frac = (num % delta != 0).any(axis=1) if N else np.zeros(size, dtype=bool)
    if not frac.any():
        return None, size
    A = np.array(rows, dtype=dtype)
    b = np.array(rhs, dtype=dtype)
    lhs = delta * (pts @ A[:, I].T) + num @ A[:, N].T if N else delta * (pts @ A[:, I].T)
    inside = (lhs <= delta * b[None, :]).all(axis=1)
    hit = np.nonzero(frac & inside)[0]
    if len(hit) == 0:
        return None, size
    t = int(hit[0])
    x = [Fraction(0)] * len(rows[0])
    for c, pv in zip(I, pts[t]):
        x[c] = Fraction(int(pv))
    for c, nv in zip(N, num[t]):
        x[c] = Fraction(int(nv), delta)
    return (tuple(x), tuple(int(v) for v in pts[t])), size


def is_box_integer(P: HPolyhedron, window: int = DEFAULT_WINDOW) -> BoxIntegerVerdict:
    """Brute-force box-integrality.

    Exact for polytopes.  For unbounded ``P`` the fixed coordinates range over
    the vertex bounding box widened by ``window`` along recession directions,
    so a "true" answer is only window-limited (``exact=False``).
    """
    if P.is_empty:
        raise EmptyPolyhedronError("box-integrality of an empty polyhedron")
    rows, rhs = P._int_rows
    n = P.n
    ranges = _coordinate_ranges(P, window)
    bounded = P.is_bounded
    # only linearly independent row sets matter; drop zero rows up front
    live = [i for i, r in enumerate(rows) if any(r)]
    checked = 0
    for size_I in range(0, n):
        for I in itertools.combinations(range(n), size_I):
            N = [c for c in range(n) if c not in I]
            for J in itertools.combinations(live, n - size_I):
                found, cnt = _scan_system(rows, rhs, list(J), list(I), N, ranges)
                checked += cnt
                if found is not None:
                    x, p = found
                    l = [None] * n
                    u = [None] * n
                    for c, pv in zip(I, p):
                        l[c] = u[c] = pv
                    w = FractionalVertexWitness(1, tuple(l), tuple(u), x)
                    return BoxIntegerVerdict(False, w, True, checked)
    return BoxIntegerVerdict(True, None, bounded, checked)


def box_vertices(P: HPolyhedron, l: Sequence, u: Sequence) -> tuple:
    """Vertices of ``P`` intersected with the box ``[l, u]``."""
    return h_to_v(box_intersect(P, l, u)).vertices


# ---------------------------------------------------------------------------
# box-TDI via face-defining matrices


def _lin_basis_equimodular(P: HPolyhedron, F: Face) -> bool:
    L = lin_space_basis(P, F)
    if L.cols == 0:
        return True
    return is_equimodular(L.T).is_equimodular


def is_box_tdi(P: HPolyhedron, cross_check: bool = False) -> BoxTDICertificate:
    """Decide box-TDIness (principal box-integrality) of ``P``.

    Each face's face-defining matrix is tested for equimodularity.  With
    ``cross_check`` the transpose of a basis of each face's linear space is
    tested as well and the two answers must agree.
    """
    if P.is_empty:
        raise EmptyPolyhedronError("box-TDIness of an empty polyhedron")
    witnesses = []
    for F in P.faces:
        M = F.fdm
        if M.rows == 0:
            ok = EquimodularVerdict(True)
            tu = M
        else:
            ok = is_equimodular(M)
            tu = normalized(M) if ok else None
        if cross_check and _lin_basis_equimodular(P, F) != ok.is_equimodular:
            raise AssertionError(f"face {F.tight_rows}: lin-space basis disagrees with face-defining matrix")
        if not ok:
            return BoxTDICertificate(False, (), Refutation(F, M, ok.refutation), cross_check)
        witnesses.append((F, tu))
    return BoxTDICertificate(True, tuple(witnesses), None, cross_check)


is_principally_box_integer = is_box_tdi


def is_fully_box_integer(P: HPolyhedron) -> bool:
    return is_box_tdi(P).verdict and is_integer(P)


# ---------------------------------------------------------------------------
# cones


def _require_cone(C: HPolyhedron) -> None:
    if not C.is_cone:
        raise ValueError("expected a cone {x : A x <= 0}")


@dataclass(frozen=True)
class ConeVerdict:
    is_box_integer: bool
    offending_generators: Optional[tuple] = None  # rows of S when false
    refutation: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.is_box_integer


def cone_box_integer(C: HPolyhedron) -> ConeVerdict:
    """Box-integrality of a cone from its generators.

    For every face, a basis of its linear hull chosen among the face's
    generators must be the transpose of an equimodular matrix.  Any basis
    gives the same answer since bases of one space have proportional
    maximal minors.
    """
    _require_cone(C)
    for F in C.faces:
        gens = list(F.rays) + list(F.lineality)
        if not gens:
            continue
        G = RatMatrix(gens, C.n)
        S = G.submatrix(rows=row_basis(G))
        v = is_equimodular(S)
        if not v:
            return ConeVerdict(False, S.row_tuples(), v.refutation)
    return ConeVerdict(True)


@dataclass(frozen=True)
class PolarityReport:
    cone: ConeVerdict
    polar: ConeVerdict

    @property
    def agree(self) -> bool:
        return self.cone.is_box_integer == self.polar.is_box_integer


def cone_polarity_check(C: HPolyhedron) -> PolarityReport:
    _require_cone(C)
    report = PolarityReport(cone_box_integer(C), cone_box_integer(polar(C)))
    if not report.agree:  # pragma: no cover - would contradict the polarity law
        raise AssertionError("cone and polar disagree on box-integrality")
    return report


@dataclass(frozen=True)
class BoxPropertyVerdict:
    holds: bool
    witness: Optional[tuple] = None
    samples: int = 0

    def __bool__(self) -> bool:
        return self.holds


def _has_box_point(C: HPolyhedron, c: tuple) -> bool:
    ranges = [range(math.floor(x), math.ceil(x) + 1) for x in c]
    return any(C.contains(p) for p in itertools.product(*ranges))


def cone_box_property(
    C: HPolyhedron, samples: int = DEFAULT_SAMPLES, radius: int = DEFAULT_WINDOW, seed: int = 0
) -> BoxPropertyVerdict:
    """Sampled check of Cook's box property.

    Half- and third-integral points of the cone within ``radius`` are scanned
    when that grid is small, then ``samples`` random rational points drawn
    from the generators.  A ``False`` answer is exact.
    """
    _require_cone(C)
    n = C.n
    tried = 0
    for q in (2, 3):
        steps = 2 * radius * q + 1
        if steps**n > 20000:
            break
        axis = [Fraction(t, q) for t in range(-radius * q, radius * q + 1)]
        for c in itertools.product(*([axis] * n)):
            if all(x.denominator == 1 for x in c) or not C.contains(c):
                continue
            tried += 1
            if not _has_box_point(C, c):
                return BoxPropertyVerdict(False, c, tried)
    V = C.vrep
    gens = list(V.rays) + list(V.lineality) + [tuple(-x for x in l) for l in V.lineality]
    if gens:
        rng = random.Random(seed)
        for _ in range(samples):
            coeffs = [Fraction(rng.randint(0, 4 * radius), rng.randint(1, 6)) for _ in gens]
            c = tuple(sum(a * g[i] for a, g in zip(coeffs, gens)) for i in range(n))
            scale = max([abs(x) for x in c] + [Fraction(1)])
            if scale > radius:
                c = tuple(x * radius / scale for x in c)
            tried += 1
            if not _has_box_point(C, c):
                return BoxPropertyVerdict(False, c, tried)
    return BoxPropertyVerdict(True, None, tried)


# ---------------------------------------------------------------------------
# dilations


@dataclass(frozen=True)
class DilationProfile:
    d: int
    observed: tuple  # (k, box-integer) pairs for k = d, 2d, ...
    case: str  # "i", "ii", "iii"
    q: Optional[int]
    monotone: bool
    exact: bool  # False when case iii has no observed cutoff within k_max


def dilation_profile(P: HPolyhedron, k_max: int = 4, window: int = DEFAULT_WINDOW) -> DilationProfile:
    """Classify the box-integer integer dilations of ``P``.

    Case i: every ``kP`` with ``d | k`` is box-integer; case ii: none is;
    case iii: exactly ``d, 2d, ..., qd``.
    """
    d = minimal_integer_dilation(P)
    observed = []
    for j in range(1, k_max + 1):
        observed.append((j * d, is_box_integer(dilate(P, j * d), window).is_box_integer))
    flags = [b for _, b in observed]
    monotone = all(not (not a and b) for a, b in zip(flags, flags[1:]))
    pbi = is_box_tdi(P).verdict
    if pbi:
        if not all(flags):  # pragma: no cover - would contradict the characterization
            raise AssertionError("principally box-integer polyhedron with a non-box-integer dilation")
        return DilationProfile(d, tuple(observed), "i", None, monotone, True)
    if not flags[0]:
        return DilationProfile(d, tuple(observed), "ii", None, monotone, True)
    q = flags.index(False) if False in flags else None
    return DilationProfile(d, tuple(observed), "iii", q, monotone, q is not None)


def _face_scan(P: HPolyhedron, F: Face, M: RatMatrix, rhs: tuple, basis, k: int, window: int, limit: int):
    """Fractional points of ``kF`` whose non-basic coordinates are integers.

    Returns the lexicographically first one, or None (also when the grid of
    non-basic values would exceed ``limit`` points).
    """
    n = P.n
    nonbasic = [c for c in range(n) if c not in basis]
    ranges = []
    for c in nonbasic:
        lo = math.floor(min(k * v[c] for v in F.vertices))
        hi = math.ceil(max(k * v[c] for v in F.vertices))
        if any(g[c] > 0 for g in F.rays) or any(g[c] for g in F.lineality):
            hi += window
        if any(g[c] < 0 for g in F.rays) or any(g[c] for g in F.lineality):
            lo -= window
        ranges.append(range(lo, hi + 1))
    if math.prod(len(r) for r in ranges) > limit:
        return None
    Dinv = inverse(M.submatrix(cols=basis))
    rows = P.A.row_tuples()
    for p in itertools.product(*ranges):
        t = [k * bi - sum(M[i, c] * pc for c, pc in zip(nonbasic, p)) for i, bi in enumerate(rhs)]
        xb = Dinv @ t
        if all(x.denominator == 1 for x in xb):
            continue
        y = [Fraction(0)] * n
        for c, pc in zip(nonbasic, p):
            y[c] = Fraction(pc)
        for c, x in zip(basis, xb):
            y[c] = x
        if all(_dot(r, y) <= k * bi for r, bi in zip(rows, P.b)):
            return tuple(y)
    return None


def extract_fractional_witness(
    P: HPolyhedron,
    certificate: BoxTDICertificate,
    k_factor: int = DEFAULT_K_FACTOR,
    window: int = DEFAULT_WINDOW,
    scan_limit: int = 4096,
) -> FractionalVertexWitness:
    """Turn a refuting face into a fractional vertex of ``kP`` and a box.

    With ``D`` a basis of the face-defining matrix ``M`` and ``j`` a column such
    that ``inv(D) M_j`` is fractional, any point of ``kF`` whose non-basic
    coordinates are integers but which is itself fractional is a vertex of
    ``kP`` intersected with the box fixing those coordinates.  For each
    ``k = d, 2d, ...`` such points are first searched on a small grid over
    ``kF``; failing that, the direction ``xbar`` solving ``M xbar = 0`` with
    ``xbar_j = -1`` and the other non-basic coordinates 0 is added to ``k x0``
    for a relative interior point ``x0``, which works once ``k`` is large.
    """
    ref = certificate.refutation
    if ref is None:
        raise ValueError("certificate has no refutation")
    F, M = ref.face, ref.fdm
    rhs = F.fdm_rhs
    n = P.n
    basis, j = first_nonintegral_basis(M)
    coef = inverse(M.submatrix(cols=basis)) @ M.col(j)
    xbar = [Fraction(0)] * n
    xbar[j] = Fraction(-1)
    for b, c in zip(basis, coef):
        xbar[b] = c
    x0 = F.relative_interior_point()
    d = minimal_integer_dilation(P)
    step = math.lcm(d, lcm_denominators(x0))
    nonbasic = [c for c in range(n) if c not in basis]
    for t in range(1, k_factor * (step // d) + 1):
        k = t * d
        y = _face_scan(P, F, M, rhs, basis, k, window, scan_limit)
        if y is None and k % step == 0:
            y = tuple(k * a + b for a, b in zip(x0, xbar))
            if not all(_dot(r, y) <= k * bi for r, bi in zip(P.A.row_tuples(), P.b)):
                y = None
        if y is None:
            continue
        l = [None] * n
        u = [None] * n
        for c in nonbasic:
            l[c] = u[c] = int(y[c])
        w = FractionalVertexWitness(k, tuple(l), tuple(u), y)
        if not w.validate(P):
            raise AssertionError(f"witness at k={k} failed validation")
        return w
    raise RuntimeError(f"no witness with k <= {k_factor * step}; raise k_factor")


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def minimal_tangent_cone_verdict(P: HPolyhedron) -> bool:
    """Conjunction of box-TDI verdicts over the tangent cones of minimal faces."""
    return all(is_box_tdi(tangent_cone(P, F)).verdict for F in minimal_faces(P))


__all__ = [
    "BoxIntegerVerdict",
    "BoxPropertyVerdict",
    "BoxTDICertificate",
    "ConeVerdict",
    "DilationProfile",
    "FractionalVertexWitness",
    "PolarityReport",
    "Refutation",
    "box_vertices",
    "cone_box_integer",
    "cone_box_property",
    "cone_polarity_check",
    "dilation_profile",
    "extract_fractional_witness",
    "is_box_integer",
    "is_box_tdi",
    "is_fully_box_integer",
    "is_principally_box_integer",
    "minimal_tangent_cone_verdict",
    "pm_lift",
]
