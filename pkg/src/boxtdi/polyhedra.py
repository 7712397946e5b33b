"""Exact polyhedra in inequality and generator form.

``HPolyhedron`` stores ``{x : A x <= b}`` and ``VPolyhedron`` stores
``conv(vertices) + cone(rays) + span(lineality)``.  Conversion between the
two uses the double description method on integer-scaled data; generators are
canonicalized (projected off the lineality space, primitive integer rays,
reduced lineality basis) so two generator forms describe the same set exactly
when they compare equal.

Faces are identified by their maximal set of tight rows and enumerated by
closing the tight sets of the generators under intersection.  Everything is
exponential in the worst case and aimed at desk-scale instances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .exactalg import (
    RatMatrix,
    kernel,
    lattice_denominator,
    lattice_member,
    lcm_denominators,
    matrix,
    rref,
    solve,
    vec,
)

INF = math.inf


class EmptyPolyhedronError(ValueError):
    """Raised by operations that need a nonempty polyhedron."""


# ---------------------------------------------------------------------------
# small integer vector helpers


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g > 1:
        return [x // g for x in v]
    return v


def _int_scaled(values: Sequence[Fraction]) -> list[int]:
    d = lcm_denominators(values)
    return [int(x * d) for x in values]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def double_description(constraints: Sequence[Sequence[int]], dim: int) -> tuple[list[list[int]], list[list[int]]]:
    """Generators of ``{y : h.y <= 0 for every constraint h}``.

    Returns ``(lineality, rays)`` as primitive integer vectors; the rays are
    the extreme rays of the cone modulo its lineality space.
    """
    lineality = [[int(i == j) for j in range(dim)] for i in range(dim)]
    rays: list[list[int]] = []
    zeros: list[int] = []  # bitmask of processed constraints tight at each ray
    for k, h in enumerate(constraints):
        bit = 1 << k
        pivot = next((idx for idx, l in enumerate(lineality) if _dot(h, l)), None)
        if pivot is not None:
            l0 = lineality[pivot]
            v0 = _dot(h, l0)
            new_lin = []
            for idx, l in enumerate(lineality):
                if idx == pivot:
                    continue
                hl = _dot(h, l)
                new_lin.append(_primitive([v0 * x - hl * y for x, y in zip(l, l0)]) if hl else l)
            new_rays = []
            for r in rays:
                hr = _dot(h, r)
                if hr:
                    r = [v0 * x - hr * y for x, y in zip(r, l0)]
                    if v0 < 0:
                        r = [-x for x in r]
                    r = _primitive(r)
                new_rays.append(r)
            zeros = [z | bit for z in zeros]
            new_rays.append([-x for x in l0] if v0 > 0 else list(l0))
            zeros.append(bit - 1)  # lineality was tight at every earlier row
            lineality, rays = new_lin, new_rays
            continue
        vals = [_dot(h, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        if not pos:
            zeros = [z | bit if v == 0 else z for z, v in zip(zeros, vals)]
            continue
        neg = [i for i, v in enumerate(vals) if v < 0]
        keep = [i for i, v in enumerate(vals) if v <= 0]
        need = dim - len(lineality) - 2
        new_rays = [rays[i] for i in keep]
        new_zeros = [zeros[i] | bit if vals[i] == 0 else zeros[i] for i in keep]
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for t in range(len(rays)):
                    if t != p and t != q and zeros[t] & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                a, b = vals[p], vals[q]
                new_rays.append(_primitive([a * y - b * x for x, y in zip(rays[p], rays[q])]))
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
    return lineality, rays


# ---------------------------------------------------------------------------
# generator form


def _project_off(points: list[tuple], lin: list[tuple]) -> list[tuple]:
    """Orthogonal projection onto the complement of span(lin)."""
    if not lin:
        return points
    L = RatMatrix(lin)
    G = L @ L.T
    out = []
    for p in points:
        coeffs = solve(G, L @ p)[0]
        out.append(tuple(x - sum(c * l[i] for c, l in zip(coeffs, lin)) for i, x in enumerate(p)))
    return out


def _canonical_lineality(lin: Sequence[Sequence]) -> list[tuple]:
    lin = [vec(l) for l in lin if any(vec(l))]
    if not lin:
        return []
    R, pivots = rref(RatMatrix(lin))
    out = []
    for i in range(len(pivots)):
        out.append(tuple(Fraction(x) for x in _primitive(_int_scaled(R.row(i)))))
    return out


def _canonical_ray(r: tuple) -> tuple:
    return tuple(Fraction(x) for x in _primitive(_int_scaled(r)))


@dataclass(frozen=True)
class VPolyhedron:
    """``conv(vertices) + cone(rays) + span(lineality)`` in dimension ``dim``."""

    dim: int
    vertices: tuple = ()
    rays: tuple = ()
    lineality: tuple = ()

    @classmethod
    def from_generators(cls, vertices=(), rays=(), lineality=(), dim: Optional[int] = None) -> "VPolyhedron":
        vertices = [vec(v) for v in vertices]
        rays = [vec(r) for r in rays]
        lineality = [vec(l) for l in lineality]
        if dim is None:
            for group in (vertices, rays, lineality):
                if group:
                    dim = len(group[0])
                    break
            else:
                raise ValueError("dimension required for an empty generator list")
        for g in itertools.chain(vertices, rays, lineality):
            if len(g) != dim:
                raise ValueError("generator of the wrong dimension")
        return cls(dim, tuple(vertices), tuple(rays), tuple(lineality))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    def canonical(self) -> "VPolyhedron":
        """Minimal canonical generators (via a round trip through H-form)."""
        return h_to_v(v_to_h(self))

    def contains(self, x) -> bool:
        return v_to_h(self).contains(x)


# ---------------------------------------------------------------------------
# inequality form


@dataclass(frozen=True, eq=False)
class HPolyhedron:
    """``{x in R^n : A x <= b}``."""

    A: RatMatrix
    b: tuple

    def __init__(self, A, b):
        A = matrix(A) if not (isinstance(A, (list, tuple)) and len(A) == 0) else None
        b = vec(b)
        if A is None:
            raise ValueError("use HPolyhedron.whole_space(n) for a system without rows")
        if A.rows != len(b):
            raise ValueError(f"{A.rows} rows but {len(b)} right-hand sides")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def whole_space(cls, n: int) -> "HPolyhedron":
        return cls(RatMatrix.zeros(0, n), ())

    def __eq__(self, other) -> bool:
        return isinstance(other, HPolyhedron) and self.A == other.A and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.A, self.b))

    def __repr__(self) -> str:
        return f"HPolyhedron(m={self.m}, n={self.n})"

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def m(self) -> int:
        return self.A.rows

    @cached_property
    def _int_rows(self) -> tuple[list[list[int]], list[int]]:
        rows, rhs = [], []
        for r, bi in zip(self.A.row_tuples(), self.b):
            d = lcm_denominators(r + (bi,))
            rows.append([int(x * d) for x in r])
            rhs.append(int(bi * d))
        return rows, rhs

    def contains(self, x) -> bool:
        x = vec(x)
        return all(_dot(r, x) <= bi for r, bi in zip(self.A.row_tuples(), self.b))

    def slack(self, x) -> tuple:
        x = vec(x)
        return tuple(bi - _dot(r, x) for r, bi in zip(self.A.row_tuples(), self.b))

    def tight_rows(self, x) -> tuple:
        return tuple(i for i, s in enumerate(self.slack(x)) if s == 0)

    @cached_property
    def vrep(self) -> VPolyhedron:
        return h_to_v(self)

    @property
    def is_empty(self) -> bool:
        return self.vrep.is_empty

    @property
    def is_bounded(self) -> bool:
        return self.vrep.is_bounded

    @property
    def is_cone(self) -> bool:
        return all(x == 0 for x in self.b)

    @cached_property
    def faces(self) -> tuple:
        return tuple(_enumerate_faces(self))

    def rows(self, idx: Iterable[int]) -> RatMatrix:
        return self.A.submatrix(rows=list(idx))


# ---------------------------------------------------------------------------
# conversions


def h_to_v(P: HPolyhedron) -> VPolyhedron:
    """Generators of an H-polyhedron via double description."""
    n = P.n
    rows, rhs = P._int_rows
    constraints = [[0] * n + [-1]]
    constraints += [r + [-bi] for r, bi in zip(rows, rhs)]
    lin, rays = double_description(constraints, n + 1)
    vertices, dirs = [], []
    for r in rays:
        t = r[n]
        if t > 0:
            vertices.append(tuple(Fraction(x, t) for x in r[:n]))
        elif t == 0:
            dirs.append(tuple(Fraction(x) for x in r[:n]))
        else:  # pragma: no cover - excluded by the t >= 0 row
            raise AssertionError("homogenizing coordinate went negative")
    if any(l[n] for l in lin):  # pragma: no cover
        raise AssertionError("lineality with nonzero homogenizing coordinate")
    if not vertices:
        return VPolyhedron(n)
    lineality = _canonical_lineality([tuple(Fraction(x) for x in l[:n]) for l in lin])
    vertices = sorted(set(_project_off(vertices, lineality)))
    dirs = sorted({_canonical_ray(r) for r in _project_off(dirs, lineality) if any(r)})
    return VPolyhedron(n, tuple(vertices), tuple(dirs), tuple(lineality))


def v_to_h(Q: VPolyhedron) -> HPolyhedron:
    """Irredundant inequality form (equalities appear as opposite pairs)."""
    n = Q.dim
    if not Q.vertices:
        return HPolyhedron(RatMatrix([[0] * n]), [-1]) if n else HPolyhedron(RatMatrix([[]], 0), [-1])
    gens = [_int_scaled(v + (Fraction(1),)) for v in Q.vertices]
    gens += [_int_scaled(r + (Fraction(0),)) for r in Q.rays]
    for l in Q.lineality:
        li = _int_scaled(l + (Fraction(0),))
        gens.append(li)
        gens.append([-x for x in li])
    lin, rays = double_description(gens, n + 1)
    # canonical representatives modulo the polar lineality
    lin_f = _canonical_lineality([tuple(Fraction(x) for x in l) for l in lin])
    ray_f = [tuple(Fraction(x) for x in r) for r in rays]
    ray_f = [_canonical_ray(r) for r in _project_off(ray_f, lin_f)]
    A_rows, b = [], []
    for l in lin_f:
        a, c = l[:n], l[n]
        if not any(a):
            continue
        A_rows.append(a)
        b.append(-c)
        A_rows.append(tuple(-x for x in a))
        b.append(c)
    ineqs = []
    for r in ray_f:
        a, c = r[:n], r[n]
        if not any(a):
            continue  # 0 <= -c with c < 0
        ineqs.append((a, -c))
    for a, bi in sorted(set(ineqs)):
        A_rows.append(a)
        b.append(bi)
    if not A_rows:
        return HPolyhedron.whole_space(n)
    return HPolyhedron(RatMatrix(A_rows, n), b)


def same_point_set(P, Q) -> bool:
    """Exact equality of two polyhedra given in either form."""
    vp = P.vrep if isinstance(P, HPolyhedron) else h_to_v(v_to_h(P))
    vq = Q.vrep if isinstance(Q, HPolyhedron) else h_to_v(v_to_h(Q))
    return vp == vq


def generators_satisfy(P: HPolyhedron, Q: VPolyhedron) -> bool:
    """Inclusion ``Q <= P`` checked generator by generator."""
    rows = P.A.row_tuples()
    for v in Q.vertices:
        if not P.contains(v):
            return False
    for r in Q.rays:
        if any(_dot(a, r) > 0 for a in rows):
            return False
    for l in Q.lineality:
        if any(_dot(a, l) != 0 for a in rows):
            return False
    return True


# ---------------------------------------------------------------------------
# faces


def _int_row_basis(rows: list[list[int]], idx: Iterable[int]) -> list[int]:
    """Lexicographically first independent subset of the given integer rows."""
    chosen: list[int] = []
    echelon: list[tuple[int, list[int]]] = []
    for i in idx:
        v = rows[i]
        for pc, e in echelon:
            if v[pc]:
                v = _primitive([e[pc] * x - v[pc] * y for x, y in zip(v, e)])
        pc = next((j for j, x in enumerate(v) if x), None)
        if pc is not None:
            chosen.append(i)
            echelon.append((pc, v))
    return chosen


@dataclass(frozen=True)
class Face:
    """A nonempty face given by its maximal tight row set."""

    tight_rows: tuple
    dim: int
    fdm: RatMatrix = field(repr=False)
    fdm_rhs: tuple = field(repr=False)
    fdm_rows: tuple = field(repr=False, default=())
    vertices: tuple = field(repr=False, default=(), compare=False)
    rays: tuple = field(repr=False, default=(), compare=False)
    lineality: tuple = field(repr=False, default=(), compare=False)

    @property
    def key(self) -> tuple:
        return (self.dim, self.tight_rows)

    def relative_interior_point(self) -> tuple:
        k = len(self.vertices)
        n = len(self.vertices[0])
        p = [sum(v[i] for v in self.vertices) / k for i in range(n)]
        for r in self.rays:
            p = [x + y for x, y in zip(p, r)]
        return tuple(p)

    def affinely_independent_points(self) -> list[tuple]:
        """``dim + 1`` affinely independent points of the face."""
        base = self.vertices[0]
        pts = [base]
        cands = [v for v in self.vertices[1:]]
        cands += [tuple(x + y for x, y in zip(base, r)) for r in self.rays]
        cands += [tuple(x + y for x, y in zip(base, l)) for l in self.lineality]
        diffs: list[tuple] = []
        from .exactalg import rank as _rank

        for c in cands:
            d = tuple(x - y for x, y in zip(c, base))
            if _rank(RatMatrix(diffs + [d])) == len(diffs) + 1:
                diffs.append(d)
                pts.append(c)
            if len(diffs) == self.dim:
                break
        return pts


def _enumerate_faces(P: HPolyhedron) -> list[Face]:
    V = P.vrep
    if V.is_empty:
        raise EmptyPolyhedronError("faces of an empty polyhedron")
    rows, rhs = P._int_rows
    n, m = P.n, P.m

    def mask_of(pred) -> int:
        out = 0
        for i in range(m):
            if pred(i):
                out |= 1 << i
        return out

    vmasks = [mask_of(lambda i, v=v: _dot(rows[i], v) == rhs[i]) for v in V.vertices]
    rmasks = [mask_of(lambda i, r=r: _dot(rows[i], r) == 0) for r in V.rays]
    gen_masks = vmasks + rmasks
    seen = set(vmasks)
    frontier = list(dict.fromkeys(vmasks))
    while frontier:
        nxt = []
        for T in frontier:
            for g in gen_masks:
                T2 = T & g
                if T2 not in seen:
                    seen.add(T2)
                    nxt.append(T2)
        frontier = nxt
    faces = []
    for T in seen:
        tight = tuple(i for i in range(m) if T >> i & 1)
        basis = _int_row_basis(rows, tight)
        fdm = P.A.submatrix(rows=basis) if basis else RatMatrix.zeros(0, n)
        faces.append(
            Face(
                tight_rows=tight,
                dim=n - len(basis),
                fdm=fdm,
                fdm_rhs=tuple(P.b[i] for i in basis),
                fdm_rows=tuple(basis),
                vertices=tuple(v for v, vm in zip(V.vertices, vmasks) if vm & T == T),
                rays=tuple(r for r, rm in zip(V.rays, rmasks) if rm & T == T),
                lineality=V.lineality,
            )
        )
    faces.sort(key=lambda f: f.key)
    return faces


def enumerate_faces(P: HPolyhedron) -> list[Face]:
    """All nonempty faces ordered by (dimension, tight row set)."""
    return list(P.faces)


def minimal_faces(P: HPolyhedron) -> list[Face]:
    faces = P.faces
    lo = faces[0].dim
    return [f for f in faces if f.dim == lo]


def face_of(P: HPolyhedron, tight_rows: Iterable[int]) -> Face:
    """The face cut out by imposing equality on ``tight_rows``."""
    want = set(tight_rows)
    best = None
    for f in P.faces:
        if want <= set(f.tight_rows) and (best is None or f.dim > best.dim):
            best = f
    if best is None:
        raise ValueError(f"rows {sorted(want)} do not define a nonempty face")
    return best


def face_defining_matrix(P: HPolyhedron, F: Face) -> tuple[RatMatrix, tuple]:
    return F.fdm, F.fdm_rhs


def lin_space_basis(P: HPolyhedron, F: Face) -> RatMatrix:
    """Columns spanning ``{x : A_F x = 0}``."""
    if not F.tight_rows:
        return RatMatrix.identity(P.n)
    return kernel(P.rows(F.tight_rows))


def tangent_cone(P: HPolyhedron, F: Face) -> HPolyhedron:
    if not F.tight_rows:
        return HPolyhedron.whole_space(P.n)
    return HPolyhedron(P.rows(F.tight_rows), [P.b[i] for i in F.tight_rows])


def normal_cone(P: HPolyhedron, F: Face) -> VPolyhedron:
    zero = (Fraction(0),) * P.n
    return VPolyhedron.from_generators([zero], [P.A.row(i) for i in F.tight_rows], dim=P.n)


def cone_generators(C: HPolyhedron) -> VPolyhedron:
    if not C.is_cone:
        raise ValueError("not a cone: right-hand side must be zero")
    return C.vrep


def polar(C: HPolyhedron) -> HPolyhedron:
    """Polar cone, as the cone generated by the rows of the constraint matrix."""
    if not C.is_cone:
        raise ValueError("polar needs a cone {x : A x <= 0}")
    zero = (Fraction(0),) * C.n
    return v_to_h(VPolyhedron.from_generators([zero], list(C.A.row_tuples()), dim=C.n))


def cone_from_generators(gens: Iterable[Sequence], dim: Optional[int] = None, lineality=()) -> HPolyhedron:
    gens = [vec(g) for g in gens]
    if dim is None:
        dim = len(gens[0]) if gens else len(vec(next(iter(lineality))))
    zero = (Fraction(0),) * dim
    return v_to_h(VPolyhedron.from_generators([zero], gens, lineality, dim=dim))


def convex_hull(points: Iterable[Sequence]) -> HPolyhedron:
    pts = [vec(p) for p in points]
    return v_to_h(VPolyhedron.from_generators(pts))


def dilate(P: HPolyhedron, k) -> HPolyhedron:
    k = Fraction(k)
    if k <= 0:
        raise ValueError("dilation factor must be positive")
    return HPolyhedron(P.A, [k * x for x in P.b])


def translate(P: HPolyhedron, t) -> HPolyhedron:
    t = vec(t)
    shift = P.A @ t
    return HPolyhedron(P.A, [x + s for x, s in zip(P.b, shift)])


def dominant(P: HPolyhedron) -> HPolyhedron:
    V = P.vrep
    units = [tuple(Fraction(int(i == j)) for j in range(P.n)) for i in range(P.n)]
    return v_to_h(VPolyhedron(P.n, V.vertices, tuple(V.rays) + tuple(units), V.lineality))


def _bound(value, sign: int):
    if value is None:
        return sign * INF
    if isinstance(value, float):
        if math.isinf(value):
            return value
        raise ValueError(f"box bounds must be integers or infinite, got {value!r}")
    f = Fraction(value)
    if f.denominator != 1:
        raise ValueError(f"box bounds must be integers, got {value!r}")
    return int(f)


def box_intersect(P: HPolyhedron, lower: Sequence, upper: Sequence) -> HPolyhedron:
    """``P`` intersected with ``{lower <= x <= upper}``; infinite bounds add no rows."""
    lower = [_bound(x, -1) for x in lower]
    upper = [_bound(x, 1) for x in upper]
    if len(lower) != P.n or len(upper) != P.n:
        raise ValueError("box dimension does not match the polyhedron")
    rows = [list(r) for r in P.A.row_tuples()]
    rhs = list(P.b)
    for i, (lo, hi) in enumerate(zip(lower, upper)):
        if lo > hi:
            raise ValueError(f"crossed bounds on coordinate {i}: {lo} > {hi}")
        if hi != INF:
            rows.append([Fraction(int(j == i)) for j in range(P.n)])
            rhs.append(Fraction(hi))
        if lo != -INF:
            rows.append([Fraction(-int(j == i)) for j in range(P.n)])
            rhs.append(Fraction(-lo))
    if not rows:
        return HPolyhedron.whole_space(P.n)
    return HPolyhedron(RatMatrix(rows, P.n), rhs)


def is_integer(P: HPolyhedron) -> bool:
    """Every minimal face contains an integer point."""
    if P.is_empty:
        raise EmptyPolyhedronError("integrality of an empty polyhedron")
    for F in minimal_faces(P):
        if not F.tight_rows:
            continue
        if not lattice_member(P.rows(F.tight_rows), [P.b[i] for i in F.tight_rows]):
            return False
    return True


def minimal_integer_dilation(P: HPolyhedron) -> int:
    """Smallest ``d > 0`` such that ``kP`` is integer exactly when ``d | k``."""
    if P.is_empty:
        raise EmptyPolyhedronError("dilation of an empty polyhedron")
    d = 1
    for F in minimal_faces(P):
        if not F.tight_rows:
            continue
        dF = lattice_denominator(P.rows(F.tight_rows), [P.b[i] for i in F.tight_rows])
        d = math.lcm(d, dF)
    return d


def integer_points(P: HPolyhedron) -> list[tuple]:
    """All integer points of a polytope (bounding-box scan)."""
    V = P.vrep
    if V.is_empty:
        return []
    if not V.is_bounded:
        raise ValueError("integer point enumeration needs a polytope")
    ranges = []
    for i in range(P.n):
        lo = math.ceil(min(v[i] for v in V.vertices))
        hi = math.floor(max(v[i] for v in V.vertices))
        ranges.append(range(lo, hi + 1))
    return [tuple(Fraction(x) for x in p) for p in itertools.product(*ranges) if P.contains(p)]


def pm_lift(P: HPolyhedron) -> HPolyhedron:
    """``{(y, z) : A (y - z) <= b, y >= 0, z >= 0}``."""
    n = P.n
    rows = [list(r) + [-x for x in r] for r in P.A.row_tuples()]
    rhs = list(P.b)
    for i in range(2 * n):
        rows.append([Fraction(-int(j == i)) for j in range(2 * n)])
        rhs.append(Fraction(0))
    return HPolyhedron(RatMatrix(rows, 2 * n), rhs)
