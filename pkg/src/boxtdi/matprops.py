"""Recognizers for unimodular, equimodular and totally unimodular matrices.

A full row rank ``r x n`` matrix is equimodular when all its nonzero
``r x r`` minors share one absolute value.  Six equivalent tests are exposed
through :func:`is_equimodular` (see :data:`ROUTES`); refutations are always
reported as two column subsets whose minors differ in absolute value.

Total unimodularity is tested exhaustively, smallest submatrices first.  The
cost is exponential; inputs beyond roughly 8x8 are not practical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactalg import (
    RatMatrix,
    column_basis,
    enumerate_maximal_submatrices,
    int_det,
    left_divide,
    lattice_equal,
    matrix,
    rank,
    row_basis,
)

ROUTES = {
    1: "nonzero maximal minors share one absolute value",
    2: "lattice(D) = lattice(A) for every basis D",
    3: "inv(D) A is integer for every basis D",
    4: "inv(D) A has entries in {0, 1, -1} for every basis D",
    5: "inv(D) A is totally unimodular for every basis D",
    6: "inv(D) A is totally unimodular for the first basis D",
}
DEFAULT_ROUTE = 6


class RankError(ValueError):
    """Raised when a recognizer needs a full row rank matrix."""


@dataclass(frozen=True)
class EquimodularVerdict:
    is_equimodular: bool
    common_abs_det: Optional[Fraction] = None
    refutation: Optional[tuple] = None  # ((cols1, det1), (cols2, det2))
    route: int = DEFAULT_ROUTE

    def __bool__(self) -> bool:
        return self.is_equimodular


@dataclass(frozen=True)
class TUVerdict:
    is_tu: bool
    violating_submatrix: Optional[tuple] = None  # (rows, cols, det)

    def __bool__(self) -> bool:
        return self.is_tu


@dataclass(frozen=True)
class TotalEquimodularVerdict:
    is_totally_equimodular: bool
    offending_rows: Optional[tuple] = None
    refutation: Optional[EquimodularVerdict] = None
    checked_subsets: int = field(default=0, compare=False)

    def __bool__(self) -> bool:
        return self.is_totally_equimodular


def _require_full_row_rank(A: RatMatrix) -> None:
    if rank(A) != A.rows:
        raise RankError(f"matrix of rank {rank(A)} with {A.rows} rows is not of full row rank")


# ---------------------------------------------------------------------------
# total unimodularity


def _tu_scan(rows: list[list[int]], row_ids: list[int], col_ids: list[int]) -> Optional[tuple]:
    """Exhaustive TU scan on a {0, +-1} integer matrix; returns a witness or None."""
    m, n = len(rows), len(rows[0]) if rows else 0
    for k in range(2, min(m, n) + 1):
        for rs in itertools.combinations(range(m), k):
            sub_rows = [rows[i] for i in rs]
            for cs in itertools.combinations(range(n), k):
                d = int_det([[r[j] for j in cs] for r in sub_rows])
                if d not in (-1, 0, 1):
                    return (
                        tuple(row_ids[i] for i in rs),
                        tuple(col_ids[j] for j in cs),
                        Fraction(d),
                    )
    return None


def is_totally_unimodular(A) -> TUVerdict:
    """Exhaustive test that every square submatrix has determinant 0 or +-1.

    Zero columns, unit columns and repeated columns (up to sign) are dropped
    before the scan since they cannot create a violation; the reported witness
    always indexes the original matrix and is the first one met in
    size-ascending lexicographic order of the reduced matrix.
    """
    A = matrix(A)
    for i, r in enumerate(A.row_tuples()):
        for j, x in enumerate(r):
            if x not in (0, 1, -1):
                return TUVerdict(False, ((i,), (j,), x))
    rows = [[int(x) for x in r] for r in A.row_tuples()]
    keep_cols: list[int] = []
    seen = set()
    for j in range(A.cols):
        col = tuple(r[j] for r in rows)
        support = sum(1 for x in col if x)
        if support <= 1:
            continue
        neg = tuple(-x for x in col)
        if col in seen or neg in seen:
            continue
        seen.add(col)
        keep_cols.append(j)
    # the transpose argument applies to rows as well
    keep_rows: list[int] = []
    seen_rows = set()
    for i, r in enumerate(rows):
        rr = tuple(r[j] for j in keep_cols)
        support = sum(1 for x in rr if x)
        if support <= 1:
            continue
        neg = tuple(-x for x in rr)
        if rr in seen_rows or neg in seen_rows:
            continue
        seen_rows.add(rr)
        keep_rows.append(i)
    reduced = [[rows[i][j] for j in keep_cols] for i in keep_rows]
    witness = _tu_scan(reduced, keep_rows, keep_cols) if reduced and keep_cols else None
    return TUVerdict(witness is None, witness)


def is_totally_unimodular_naive(A) -> TUVerdict:
    """Plain exhaustive scan without reductions (reference implementation)."""
    A = matrix(A)
    for i, r in enumerate(A.row_tuples()):
        for j, x in enumerate(r):
            if x not in (0, 1, -1):
                return TUVerdict(False, ((i,), (j,), x))
    rows = [[int(x) for x in r] for r in A.row_tuples()]
    witness = _tu_scan(rows, list(range(A.rows)), list(range(A.cols)))
    return TUVerdict(witness is None, witness)


# ---------------------------------------------------------------------------
# equimodularity


def minor_refutation(A) -> Optional[tuple]:
    """Two lexicographically least column subsets with different nonzero |det|.

    The first subset is the first basis in lexicographic order; the second is
    the first later subset whose minor is nonzero and differs in absolute
    value.  Returns None when A is equimodular.
    """
    first = None
    for cols, d in enumerate_maximal_submatrices(A):
        if d == 0:
            continue
        if first is None:
            first = (cols, d)
        elif abs(d) != abs(first[1]):
            return first, (cols, d)
    return None


def _common_abs_det(A: RatMatrix) -> Fraction:
    from .exactalg import det

    basis = column_basis(A)
    return abs(det(A.submatrix(cols=basis)))


def _bases(A: RatMatrix):
    rows = A.lifted()[0]
    for cols in itertools.combinations(range(A.cols), A.rows):
        if int_det([[r[j] for j in cols] for r in rows]) != 0:
            yield cols


def normalized(A, basis=None) -> RatMatrix:
    """``inv(D) A`` for the basis ``D`` (first basis by default)."""
    A = matrix(A)
    if basis is None:
        basis = column_basis(A)
    return left_divide(A.submatrix(cols=basis), A)


def _route_holds(A: RatMatrix, route: int) -> bool:
    if route == 1:
        return minor_refutation(A) is None
    if route == 6:
        basis = column_basis(A)
        N = normalized(A, basis)
        if any(x not in (0, 1, -1) for x in N.entries()):
            return False
        # [I | B] is TU iff B is TU
        rest = [j for j in range(A.cols) if j not in basis]
        if not rest:
            return True
        return is_totally_unimodular(N.submatrix(cols=rest)).is_tu
    for basis in _bases(A):
        D = A.submatrix(cols=basis)
        if route == 2:
            if not lattice_equal(D, A):
                return False
            continue
        N = left_divide(D, A)
        if route == 3:
            ok = all(x.denominator == 1 for x in N.entries())
        elif route == 4:
            ok = all(x in (0, 1, -1) for x in N.entries())
        elif route == 5:
            ok = is_totally_unimodular(N).is_tu
        else:
            raise ValueError(f"unknown route {route}")
        if not ok:
            return False
    return True


def is_equimodular(A, route: int = DEFAULT_ROUTE, extended: bool = False) -> EquimodularVerdict:
    """Decide equimodularity of a full row rank matrix.

    ``route`` selects one of the six equivalent criteria in :data:`ROUTES`.
    With ``extended=True`` a rank-deficient matrix is accepted and tested
    through each maximal set of linearly independent rows; a verdict for the
    first failing row set is returned.
    """
    A = matrix(A)
    if route not in ROUTES:
        raise ValueError(f"unknown route {route}")
    if extended and rank(A) < A.rows:
        r = rank(A)
        first = None
        for rows in itertools.combinations(range(A.rows), r):
            if rank(A.submatrix(rows=rows)) < r:
                continue
            v = is_equimodular(A.submatrix(rows=rows), route)
            if not v:
                return v
            first = first or v
        if first is None:  # zero matrix: no rows to test
            return EquimodularVerdict(True, Fraction(1), None, route)
        return first
    _require_full_row_rank(A)
    if A.rows == 0:
        return EquimodularVerdict(True, Fraction(1), None, route)
    if _route_holds(A, route):
        return EquimodularVerdict(True, _common_abs_det(A), None, route)
    ref = minor_refutation(A)
    if ref is None:  # pragma: no cover - would mean the routes disagree
        raise AssertionError(f"route {route} rejected a matrix whose minors agree")
    return EquimodularVerdict(False, None, ref, route)


def is_unimodular(A) -> bool:
    """Integer, full row rank, and every nonzero maximal minor is +-1."""
    A = matrix(A)
    if not A.is_integer():
        raise ValueError("unimodularity is defined for integer matrices")
    _require_full_row_rank(A)
    return all(d in (0, 1, -1) for _, d in enumerate_maximal_submatrices(A))


def is_totally_equimodular(A) -> TotalEquimodularVerdict:
    """Every linearly independent set of rows forms an equimodular matrix.

    Row subsets are enumerated by increasing size, then lexicographically.
    """
    A = matrix(A)
    checked = 0
    for size in range(1, min(A.rows, A.cols) + 1):
        for rows in itertools.combinations(range(A.rows), size):
            sub = A.submatrix(rows=rows)
            if rank(sub) < size:
                continue
            checked += 1
            v = is_equimodular(sub)
            if not v:
                return TotalEquimodularVerdict(False, rows, v, checked)
    return TotalEquimodularVerdict(True, None, None, checked)


def first_nonintegral_basis(A) -> Optional[tuple[tuple, int]]:
    """A basis ``D`` and a column ``j`` with ``inv(D) A_j`` not integer.

    Exists exactly when A is not equimodular; bases are scanned in
    lexicographic order.
    """
    A = matrix(A)
    for basis in _bases(A):
        N = left_divide(A.submatrix(cols=basis), A)
        for j in range(A.cols):
            if any(N[i, j].denominator != 1 for i in range(A.rows)):
                return basis, j
    return None


__all__ = [
    "ROUTES",
    "DEFAULT_ROUTE",
    "RankError",
    "EquimodularVerdict",
    "TUVerdict",
    "TotalEquimodularVerdict",
    "is_totally_unimodular",
    "is_totally_unimodular_naive",
    "is_equimodular",
    "is_unimodular",
    "is_totally_equimodular",
    "minor_refutation",
    "normalized",
    "first_nonintegral_basis",
    "row_basis",
]
