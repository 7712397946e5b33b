"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` values, vectors are tuples of
fractions and matrices are immutable :class:`RatMatrix` objects.  Determinants
and ranks go through a fraction-free (Bareiss) elimination on an integer lift
of the input; Hermite normal forms are column-style and canonical, so lattice
equality reduces to structural equality of the forms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

Rational = Fraction
RatVector = tuple  # tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """Convert ints, fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational scalars")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        # floats are only accepted when they hold an exact small dyadic value
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def vec(values: Iterable) -> tuple:
    return tuple(to_fraction(v) for v in values)


def is_integral(value: Fraction) -> bool:
    return value.denominator == 1


def lcm_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v.denominator)
    return out


class RatMatrix:
    """Dense immutable matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "_data", "_hash", "_lift", "_rank")

    def __init__(self, data: Sequence[Sequence], cols: int | None = None):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise ValueError("cannot infer the column count of an empty matrix")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows
        self._hash = None
        self._lift = None
        self._rank = None

    @classmethod
    def _trusted(cls, rows: tuple, cols: int) -> "RatMatrix":
        obj = cls.__new__(cls)
        obj.rows = len(rows)
        obj.cols = cols
        obj._data = rows
        obj._hash = None
        obj._lift = None
        obj._rank = None
        return obj

    def lifted(self) -> tuple[tuple, Fraction, tuple]:
        """Cached integer lift: (integer rows, product of row scales, row scales)."""
        if self._lift is None:
            rows, scales, prod = [], [], 1
            for r in self._data:
                d = lcm_denominators(r)
                rows.append(tuple(x.numerator for x in r) if d == 1 else tuple(int(x * d) for x in r))
                scales.append(d)
                prod *= d
            self._lift = (tuple(rows), Fraction(prod), tuple(scales))
        return self._lift

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        zero = Fraction(0)
        return cls._trusted(tuple((zero,) * cols for _ in range(rows)), cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RatMatrix":
        columns = [vec(c) for c in columns]
        if not columns:
            if rows is None:
                raise ValueError("row count required for a matrix without columns")
            return cls._trusted(tuple(() for _ in range(rows)), 0)
        return cls(list(zip(*columns)), len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def row_tuples(self) -> tuple:
        return self._data

    def entries(self) -> list:
        """Row-major flat list of entries."""
        return [x for r in self._data for x in r]

    def __getitem__(self, key):
        i, j = key
        return self._data[i][j]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return self.rows

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix._trusted(tuple(zip(*self._data)) if self.rows else tuple(() for _ in range(self.cols)), self.rows)

    def submatrix(self, rows: Iterable[int] | None = None, cols: Iterable[int] | None = None) -> "RatMatrix":
        rows = range(self.rows) if rows is None else list(rows)
        cols = range(self.cols) if cols is None else list(cols)
        return RatMatrix._trusted(tuple(tuple(self._data[i][j] for j in cols) for i in rows), len(cols))

    def stack(self, other: "RatMatrix") -> "RatMatrix":
        if other.cols != self.cols:
            raise ValueError("column mismatch")
        return RatMatrix._trusted(self._data + other._data, self.cols)

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        if other.rows != self.rows:
            raise ValueError("row mismatch")
        return RatMatrix._trusted(tuple(a + b for a, b in zip(self._data, other._data)), self.cols + other.cols)

    def scale(self, k) -> "RatMatrix":
        k = to_fraction(k)
        return RatMatrix._trusted(tuple(tuple(k * x for x in r) for r in self._data), self.cols)

    def __neg__(self) -> "RatMatrix":
        return self.scale(-1)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in matrix product")
            ocols = other.T._data
            return RatMatrix._trusted(
                tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self._data),
                other.cols,
            )
        v = vec(other)
        if len(v) != self.cols:
            raise ValueError("shape mismatch in matrix-vector product")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._data)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self.cols == other.cols and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(fmt(x) for x in r) + "]" for r in self._data)
        return f"RatMatrix([{body}])"

    def is_integer(self) -> bool:
        return all(x.denominator == 1 for r in self._data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]


def matrix(data, cols: int | None = None) -> RatMatrix:
    if isinstance(data, RatMatrix):
        return data
    return RatMatrix(data, cols)


def fmt(x: Fraction) -> str:
    """Exact ``p`` or ``p/q`` rendering."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# integer lifts and fraction-free elimination


def _bareiss(a: list[list[int]], ncols: int, stop_at_zero_pivot: bool = False) -> tuple[int, int, list[int]]:
    """In-place fraction-free elimination.

    Returns ``(rank, sign, pivot_columns)`` where ``sign`` tracks row swaps.
    After the call the last pivot value ``a[rank-1][pivot]`` equals the
    determinant of the leading rank x rank minor on the pivot columns (up to
    ``sign``).
    """
    m = len(a)
    rank, sign, prev = 0, 1, 1
    pivots: list[int] = []
    for c in range(ncols):
        if rank == m:
            break
        p = next((i for i in range(rank, m) if a[i][c] != 0), None)
        if p is None:
            if stop_at_zero_pivot:
                return rank, 0, pivots
            continue
        if p != rank:
            a[p], a[rank] = a[rank], a[p]
            sign = -sign
        piv = a[rank][c]
        for i in range(rank + 1, m):
            ai = a[i]
            f = ai[c]
            ar = a[rank]
            for j in range(c + 1, ncols):
                ai[j] = (piv * ai[j] - f * ar[j]) // prev
            ai[c] = 0
        prev = piv
        pivots.append(c)
        rank += 1
    return rank, sign, pivots


def det(M) -> Fraction:
    """Exact determinant of a square matrix."""
    M = matrix(M)
    if M.rows != M.cols:
        raise ValueError(f"determinant of a non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return Fraction(1)
    if n == 1:
        return M[0, 0]
    if n == 2:
        return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    lift, scale, _ = M.lifted()
    a = [list(r) for r in lift]
    rank, sign, _ = _bareiss(a, n, stop_at_zero_pivot=True)
    if rank < n:
        return Fraction(0)
    return Fraction(sign * a[n - 1][n - 1]) / scale


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix given as nested sequences."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    a = [list(r) for r in rows]
    rank, sign, _ = _bareiss(a, n, stop_at_zero_pivot=True)
    return sign * a[n - 1][n - 1] if rank == n else 0


def rank(M) -> int:
    M = matrix(M)
    if M.rows == 0 or M.cols == 0:
        return 0
    if M._rank is None:
        a = [list(r) for r in M.lifted()[0]]
        M._rank = _bareiss(a, M.cols)[0]
    return M._rank


def row_basis(M, among: Iterable[int] | None = None) -> list[int]:
    """Lexicographically first maximal set of linearly independent rows."""
    M = matrix(M)
    chosen: list[int] = []
    echelon: list[list[Fraction]] = []
    pivcols: list[int] = []
    for i in range(M.rows) if among is None else among:
        v = list(M.row(i))
        for e, pc in zip(echelon, pivcols):
            if v[pc]:
                f = v[pc] / e[pc]
                v = [x - f * y for x, y in zip(v, e)]
        pc = next((j for j, x in enumerate(v) if x), None)
        if pc is not None:
            chosen.append(i)
            echelon.append(v)
            pivcols.append(pc)
            if len(chosen) == M.cols:
                break
    return chosen


def column_basis(M) -> list[int]:
    """Lexicographically first basis among the columns."""
    return row_basis(matrix(M).T)


def rref(M) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form and its pivot columns."""
    M = matrix(M)
    a = [list(r) for r in M.row_tuples()]
    pivots: list[int] = []
    r = 0
    for c in range(M.cols):
        p = next((i for i in range(r, M.rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(M.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == M.rows:
            break
    return RatMatrix._trusted(tuple(tuple(row) for row in a), M.cols), pivots


def kernel(M) -> RatMatrix:
    """Basis of the null space, returned as the columns of an n x k matrix."""
    M = matrix(M)
    n = M.cols
    R, pivots = rref(M)
    free = [j for j in range(n) if j not in set(pivots)]
    cols = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i, f]
        cols.append(v)
    return RatMatrix.from_columns(cols, rows=n)


def solve(A, b) -> tuple[tuple, RatMatrix] | None:
    """Solve ``A x = b``.

    Returns ``None`` for an inconsistent system, otherwise a particular
    solution together with a matrix whose columns span the null space of A.
    """
    A = matrix(A)
    b = vec(b)
    if len(b) != A.rows:
        raise ValueError("right-hand side length does not match the row count")
    aug = RatMatrix._trusted(tuple(r + (bi,) for r, bi in zip(A.row_tuples(), b)), A.cols + 1)
    R, pivots = rref(aug)
    if A.cols in pivots:
        return None
    x = [Fraction(0)] * A.cols
    for i, pc in enumerate(pivots):
        x[pc] = R[i, A.cols]
    return tuple(x), kernel(A)


def int_adjugate(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    """``(adj, det)`` of a square integer matrix, so that ``inv = adj / det``.

    Fraction-free Gauss-Jordan on ``[N | I]``; every division is exact.
    Raises ZeroDivisionError for a singular matrix.
    """
    n = len(rows)
    a = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    prev = 1
    sign = 1
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(n):
            if i == k:
                continue
            f = a[i][k]
            a[i] = [(piv * x - f * y) // prev for x, y in zip(a[i], a[k])]
        prev = piv
    # now the left block is prev * I, and prev = sign * det
    if sign < 0:
        return [[-x for x in r[n:]] for r in a], -prev
    return [r[n:] for r in a], prev


def inverse(M) -> RatMatrix:
    M = matrix(M)
    n = M.rows
    if n != M.cols:
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return M
    rows, _, scales = M.lifted()
    adj, d = int_adjugate(rows)
    # M = diag(1/s_i) N, so inv(M) = inv(N) diag(s_i)
    return RatMatrix._trusted(
        tuple(tuple(Fraction(x * s, d) for x, s in zip(r, scales)) for r in adj), n
    )


def left_divide(D, A) -> RatMatrix:
    """``inv(D) A`` for square nonsingular ``D``."""
    D, A = matrix(D), matrix(A)
    if D.rows != A.rows:
        raise ValueError("row mismatch")
    drows, _, scales = D.lifted()
    adj, d = int_adjugate(drows)
    # inv(D) A = adj diag(s) (L A) / (d L) with L clearing A's denominators
    L = lcm_denominators(A.entries())
    sa = [[s * (x.numerator if L == 1 else int(x * L)) for x in r] for s, r in zip(scales, A.row_tuples())]
    den = d * L
    cols = list(zip(*sa))
    out = []
    for r in adj:
        out.append(tuple(Fraction(sum(x * y for x, y in zip(r, col)), den) for col in cols))
    return RatMatrix._trusted(tuple(out), A.cols)


# ---------------------------------------------------------------------------
# Hermite normal form and lattices


@dataclass(frozen=True)
class HermiteForm:
    """Column-style Hermite normal form ``A U = [H | 0]``.

    ``H`` has one column per pivot; ``pivots[j]`` is the row holding the
    (positive) pivot of column ``j``.  Entries of a pivot row left of its
    pivot lie in ``[0, pivot)``; entries above a pivot are zero.
    """

    H: RatMatrix
    U: RatMatrix
    pivots: tuple

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _hnf_columns(rows: list[list[int]], ncols: int, track: bool = True):
    """Column HNF on integer data, returned as column lists."""
    m = len(rows)
    cols = [[rows[i][j] for i in range(m)] for j in range(ncols)]
    ucols = [[int(i == j) for i in range(ncols)] for j in range(ncols)] if track else None
    pivots: list[int] = []
    c = 0
    for i in range(m):
        if c == ncols:
            break
        for j in range(c + 1, ncols):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[c][i]
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            cc, cj = cols[c], cols[j]
            cols[c] = [s * x + t * y for x, y in zip(cc, cj)]
            cols[j] = [ag * y - bg * x for x, y in zip(cc, cj)]
            if track:
                uc, uj = ucols[c], ucols[j]
                ucols[c] = [s * x + t * y for x, y in zip(uc, uj)]
                ucols[j] = [ag * y - bg * x for x, y in zip(uc, uj)]
        piv = cols[c][i]
        if piv == 0:
            continue
        if piv < 0:
            cols[c] = [-x for x in cols[c]]
            if track:
                ucols[c] = [-x for x in ucols[c]]
            piv = -piv
        for k in range(c):
            q = cols[k][i] // piv
            if q:
                cols[k] = [x - q * y for x, y in zip(cols[k], cols[c])]
                if track:
                    ucols[k] = [x - q * y for x, y in zip(ucols[k], ucols[c])]
        pivots.append(i)
        c += 1
    return cols, ucols, pivots


def hnf(A) -> HermiteForm:
    """Canonical column-style Hermite normal form of an integer matrix."""
    A = matrix(A)
    if not A.is_integer():
        raise ValueError("hnf requires an integer matrix")
    rows = [[int(x) for x in r] for r in A.row_tuples()]
    cols, ucols, pivots = _hnf_columns(rows, A.cols)
    rank_ = len(pivots)
    H = RatMatrix.from_columns(cols[:rank_], rows=A.rows)
    U = RatMatrix.from_columns(ucols, rows=A.cols) if A.cols else RatMatrix.zeros(0, 0)
    return HermiteForm(H, U, tuple(pivots))


def _lattice_basis(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    cols, _, pivots = _hnf_columns(rows, ncols, track=False)
    return cols[: len(pivots)], pivots


def _scaled_integer(A: RatMatrix, extra: Iterable[Fraction] = ()) -> tuple[list[list[int]], int]:
    d = lcm_denominators(itertools.chain(A.entries(), extra))
    return [[int(x * d) for x in r] for r in A.row_tuples()], d


def _hnf_coefficients(basis_cols: list[list[int]], pivots: list[int], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve ``H y = target`` over the rationals; None if inconsistent."""
    y: list[Fraction] = []
    for j, p in enumerate(pivots):
        s = target[p] - sum(basis_cols[k][p] * y[k] for k in range(j))
        y.append(Fraction(s) / basis_cols[j][p])
    m = len(target)
    for i in range(m):
        if sum(basis_cols[k][i] * y[k] for k in range(len(y))) != target[i]:
            return None
    return y


def lattice_member(A, b) -> bool:
    """True iff ``b`` is an integer combination of the columns of ``A``."""
    A = matrix(A)
    b = vec(b)
    if len(b) != A.rows:
        raise ValueError("vector length does not match the row count")
    rows, d = _scaled_integer(A)
    target = [x * d for x in b]
    if any(t.denominator != 1 for t in target):
        return False
    basis, pivots = _lattice_basis(rows, A.cols)
    y = _hnf_coefficients(basis, pivots, target)
    return y is not None and all(v.denominator == 1 for v in y)


def lattice_solve(A, b) -> tuple | None:
    """Integer vector ``x`` with ``A x = b``, or None when none exists."""
    A = matrix(A)
    b = vec(b)
    rows, d = _scaled_integer(A)
    target = [x * d for x in b]
    if any(t.denominator != 1 for t in target):
        return None
    cols, ucols, pivots = _hnf_columns(rows, A.cols)
    y = _hnf_coefficients(cols[: len(pivots)], pivots, target)
    if y is None or any(v.denominator != 1 for v in y):
        return None
    x = [Fraction(0)] * A.cols
    for j, yj in enumerate(y):
        for i in range(A.cols):
            x[i] += ucols[j][i] * yj
    return tuple(x)


def lattice_denominator(A, b) -> int | None:
    """Smallest positive integer ``k`` with ``k b`` in lattice(A).

    Returns None when ``b`` is outside the column space of ``A``.
    """
    A = matrix(A)
    b = vec(b)
    rows, d = _scaled_integer(A)
    target = [x * d for x in b]
    basis, pivots = _lattice_basis(rows, A.cols)
    y = _hnf_coefficients(basis, pivots, target)
    if y is None:
        return None
    return lcm_denominators(itertools.chain(y, target))


def lattice_equal(A, B) -> bool:
    """True iff the columns of A and of B generate the same lattice."""
    A, B = matrix(A), matrix(B)
    if A.rows != B.rows:
        raise ValueError("lattices live in spaces of different dimension")
    d = lcm_denominators(itertools.chain(A.entries(), B.entries()))
    ra = [[int(x * d) for x in r] for r in A.row_tuples()]
    rb = [[int(x * d) for x in r] for r in B.row_tuples()]
    ha, pa = _lattice_basis(ra, A.cols)
    hb, pb = _lattice_basis(rb, B.cols)
    return pa == pb and ha == hb


def enumerate_maximal_submatrices(A) -> Iterator[tuple[tuple, Fraction]]:
    """Yield ``(column_subset, det)`` for every r-subset of columns, in lex order."""
    A = matrix(A)
    r = A.rows
    if rank(A) != r:
        raise ValueError("enumerate_maximal_submatrices needs a full row rank matrix")
    rows, scale, _ = A.lifted()
    for cols in itertools.combinations(range(A.cols), r):
        sub = [[row[j] for j in cols] for row in rows]
        yield cols, Fraction(int_det(sub)) / scale
