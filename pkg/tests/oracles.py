"""Independent brute-force reference implementations used by the tests.

Nothing here imports the package; everything is done with plain Fractions
and exhaustive enumeration so it can only be used on tiny inputs.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def F(rows):
    return [[Fraction(x) for x in r] for r in rows]


def cofactor_det(M) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(M[0][0])
    total = Fraction(0)
    for j in range(n):
        if M[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in M[1:]]
        total += (-1) ** j * Fraction(M[0][j]) * cofactor_det(minor)
    return total


def gauss_rank(M) -> int:
    a = [list(map(Fraction, r)) for r in M]
    if not a:
        return 0
    rank = 0
    for c in range(len(a[0])):
        p = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][c] != 0:
                f = a[i][c] / a[rank][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def cramer(M, b):
    """Unique solution of a square system, or None if singular."""
    d = cofactor_det(M)
    if d == 0:
        return None
    n = len(M)
    out = []
    for j in range(n):
        Mj = [r[:j] + [bi] + r[j + 1:] for r, bi in zip(M, b)]
        out.append(cofactor_det(Mj) / d)
    return tuple(out)


def brute_tu(M) -> bool:
    m, n = len(M), len(M[0]) if M else 0
    for k in range(1, min(m, n) + 1):
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                if cofactor_det([[M[i][j] for j in cs] for i in rs]) not in (-1, 0, 1):
                    return False
    return True


def all_maximal_minors(M) -> list[Fraction]:
    r = len(M)
    return [cofactor_det([[row[j] for j in cs] for row in M]) for cs in itertools.combinations(range(len(M[0])), r)]


def brute_equimodular(M) -> bool:
    vals = {abs(d) for d in all_maximal_minors(M) if d != 0}
    return len(vals) == 1


def contains(A, b, x) -> bool:
    return all(sum(Fraction(a) * xi for a, xi in zip(r, x)) <= bi for r, bi in zip(A, b))


def brute_vertices(A, b) -> set:
    """Vertices of {Ax <= b} by solving every n-subset of rows (any polyhedron)."""
    n = len(A[0])
    out = set()
    for J in itertools.combinations(range(len(A)), n):
        x = cramer([list(map(Fraction, A[j])) for j in J], [Fraction(b[j]) for j in J])
        if x is not None and contains(A, b, x):
            out.add(x)
    return out


def tight(A, b, x) -> frozenset:
    return frozenset(i for i, (r, bi) in enumerate(zip(A, b)) if sum(Fraction(a) * xi for a, xi in zip(r, x)) == bi)


def brute_faces_polytope(A, b) -> set:
    """Maximal tight sets of all faces of a polytope, via its vertices."""
    verts = brute_vertices(A, b)
    zs = [tight(A, b, v) for v in verts]
    faces = set()
    for T in itertools.chain.from_iterable(itertools.combinations(range(len(A)), k) for k in range(len(A) + 1)):
        T = frozenset(T)
        on = [z for z in zs if T <= z]
        if on:
            faces.add(frozenset.intersection(*on))
    return faces


def brute_box_integer(A, b, ranges) -> tuple[bool, tuple | None]:
    """Try every integer box with bounds in the ranges or infinite."""
    n = len(A[0])
    choices = []
    for lo, hi in ranges:
        opts = [None] + list(range(lo, hi + 1))
        choices.append([(l, u) for l in opts for u in opts if l is None or u is None or l <= u])
    for box in itertools.product(*choices):
        rows = [list(r) for r in A]
        rhs = list(b)
        for i, (l, u) in enumerate(box):
            if u is not None:
                rows.append([int(i == j) for j in range(n)])
                rhs.append(u)
            if l is not None:
                rows.append([-int(i == j) for j in range(n)])
                rhs.append(-l)
        for v in brute_vertices(rows, rhs):
            if any(x.denominator != 1 for x in v):
                return False, (box, v)
    return True, None


def has_k4_minor(n: int, edges) -> bool:
    """Assign each vertex to one of four branch sets or to none."""
    adj = {v: set() for v in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)

    def connected(S):
        S = set(S)
        start = next(iter(S))
        seen, stack = {start}, [start]
        while stack:
            u = stack.pop()
            for w in adj[u] & S:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == S

    for labels in itertools.product(range(5), repeat=n):
        sets = [[v for v in range(n) if labels[v] == k] for k in range(4)]
        if any(not s for s in sets):
            continue
        if not all(connected(s) for s in sets):
            continue
        ok = True
        for i, j in itertools.combinations(range(4), 2):
            if not any(w in adj[u] for u in sets[i] for w in sets[j]):
                ok = False
                break
        if ok:
            return True
    return False


def integer_solution_brute(A, b, bound: int = 4):
    n = len(A[0])
    for x in itertools.product(range(-bound, bound + 1), repeat=n):
        if all(sum(Fraction(a) * xi for a, xi in zip(r, x)) == bi for r, bi in zip(A, b)):
            return x
    return None


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out
