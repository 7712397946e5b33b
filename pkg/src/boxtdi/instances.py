"""Structured instances: clutters, graphs, stable set polytopes and graph cones.

Vertex and element orders of the named instances are chosen so that the
classic nonequimodular 3x6 matrix shows up verbatim as a face-defining matrix
(S3 is ordered b, c, v, a, d, e; the edges of K4 follow the usual drawing with
the center vertex 0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import networkx as nx

from .exactalg import RatMatrix
from .polyhedra import HPolyhedron, VPolyhedron, convex_hull, same_point_set, v_to_h

# ---------------------------------------------------------------------------
# clutters


@dataclass(frozen=True)
class Clutter:
    """Members are frozensets over ``range(ground)``; none contains another."""

    ground: int
    members: tuple

    def __init__(self, ground: int, members: Iterable[Iterable[int]]):
        ms = sorted({frozenset(m) for m in members}, key=lambda s: (len(s), sorted(s)))
        for m in ms:
            for x in m:
                if not 0 <= x < ground:
                    raise ValueError(f"element {x} outside ground set of size {ground}")
        for a, b in itertools.permutations(ms, 2):
            if a < b:
                raise ValueError(f"member {sorted(a)} is contained in {sorted(b)}")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "members", tuple(ms))

    def matrix(self) -> RatMatrix:
        """Incidence matrix, one row per member."""
        return RatMatrix([[int(e in m) for e in range(self.ground)] for m in self.members], self.ground)

    def __repr__(self) -> str:
        return f"Clutter({self.ground}, {[sorted(m) for m in self.members]})"


def _minimal(sets: Iterable[frozenset]) -> list[frozenset]:
    sets = sorted(set(sets), key=len)
    out: list[frozenset] = []
    for s in sets:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def _relabel(sets: Iterable[frozenset], keep: Sequence[int]) -> list[frozenset]:
    pos = {e: i for i, e in enumerate(keep)}
    return [frozenset(pos[x] for x in s) for s in sets]


def _check_element(C: Clutter, e: int) -> None:
    if not 0 <= e < C.ground:
        raise ValueError(f"element {e} outside ground set of size {C.ground}")


def delete(C: Clutter, e: int) -> Clutter:
    """Members avoiding ``e``; the remaining elements are renumbered in order."""
    _check_element(C, e)
    keep = [x for x in range(C.ground) if x != e]
    return Clutter(C.ground - 1, _relabel([m for m in C.members if e not in m], keep))


def contract(C: Clutter, e: int) -> Clutter:
    """Inclusionwise minimal sets among ``m - {e}``."""
    _check_element(C, e)
    keep = [x for x in range(C.ground) if x != e]
    return Clutter(C.ground - 1, _relabel(_minimal(m - {e} for m in C.members), keep))


def _minor(C: Clutter, deleted: Iterable[int], contracted: Iterable[int]) -> Clutter:
    deleted, contracted = set(deleted), set(contracted)
    sets = [m for m in C.members if not m & deleted]
    sets = _minimal(m - contracted for m in sets)
    keep = [x for x in range(C.ground) if x not in deleted | contracted]
    return Clutter(len(keep), _relabel(sets, keep))


@lru_cache(maxsize=64)
def _isomorphs(C: Clutter) -> frozenset:
    out = set()
    for perm in itertools.permutations(range(C.ground)):
        out.add(frozenset(frozenset(perm[x] for x in m) for m in C.members))
    return frozenset(out)


def has_minor(C: Clutter, target: Clutter) -> bool:
    """Whether some deletion/contraction sequence of ``C`` is isomorphic to ``target``.

    Deletions and contractions of distinct elements commute, so it is enough
    to try every split of ``ground - target.ground`` elements.
    """
    k = C.ground - target.ground
    if k < 0:
        return False
    forms = _isomorphs(target)
    for removed in itertools.combinations(range(C.ground), k):
        for mask in range(1 << k):
            dl = [removed[i] for i in range(k) if mask >> i & 1]
            ct = [removed[i] for i in range(k) if not mask >> i & 1]
            M = _minor(C, dl, ct)
            if frozenset(M.members) in forms:
                return True
    return False


def is_binary(C: Clutter) -> bool:
    """Symmetric difference of any three members contains a member."""
    ms = C.members
    for X, Y, Z in itertools.combinations_with_replacement(ms, 3):
        s = X ^ Y ^ Z
        if not any(m <= s for m in ms):
            return False
    return True


def covering_polyhedron(C: Clutter) -> HPolyhedron:
    """``{x : A_C x >= 1, x >= 0}`` written as ``<=`` rows."""
    n = C.ground
    rows = [[-int(e in m) for e in range(n)] for m in C.members]
    rhs = [-1] * len(rows)
    for i in range(n):
        rows.append([-int(i == j) for j in range(n)])
        rhs.append(0)
    return HPolyhedron(RatMatrix(rows, n), rhs)


# K4 on vertices 0 (center), 1, 2, 3; edges in the order used for Q6 / Q7.
K4_EDGES = ((0, 1), (0, 3), (0, 2), (1, 3), (1, 2), (2, 3))


def _k4_triangles() -> list[frozenset]:
    out = []
    for tri in itertools.combinations(range(4), 3):
        out.append(frozenset(i for i, (a, b) in enumerate(K4_EDGES) if a in tri and b in tri))
    return out


def _k4_perfect_matchings() -> list[frozenset]:
    out = []
    for i, j in itertools.combinations(range(6), 2):
        if not set(K4_EDGES[i]) & set(K4_EDGES[j]):
            out.append(frozenset((i, j)))
    return out


def q6() -> Clutter:
    """Triangles of K4 over its 6 edges."""
    return Clutter(6, _k4_triangles())


def q7() -> Clutter:
    """Triangles and perfect matchings of K4, each with the extra element 6."""
    return Clutter(7, [X | {6} for X in _k4_triangles() + _k4_perfect_matchings()])


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``range(n)`` with optional vertex names."""

    n: int
    edges: tuple
    names: tuple = field(default=(), compare=False)

    def __init__(self, n: int, edges: Iterable[Sequence[int]], names: Sequence[str] = ()):
        es = []
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range")
            e = (min(u, v), max(u, v))
            if e in es:
                raise ValueError(f"repeated edge {e}")
            es.append(e)
        if names and len(names) != n:
            raise ValueError("one name per vertex required")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(es))
        object.__setattr__(self, "names", tuple(names) if names else tuple(str(i) for i in range(n)))

    @classmethod
    def from_names(cls, names: Sequence[str], edges: Iterable[Sequence[str]]) -> "Graph":
        idx = {s: i for i, s in enumerate(names)}
        return cls(len(names), [(idx[a], idx[b]) for a, b in edges], names)

    def index(self, name) -> int:
        if isinstance(name, int):
            return name
        return self.names.index(name)

    def neighbors(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def remove_vertex(self, v) -> "Graph":
        v = self.index(v)
        keep = [u for u in range(self.n) if u != v]
        pos = {u: i for i, u in enumerate(keep)}
        es = [(pos[a], pos[b]) for a, b in self.edges if v not in (a, b)]
        return Graph(len(keep), es, [self.names[u] for u in keep])

    def delete_edge(self, e: Sequence[int]) -> "Graph":
        e = (min(e), max(e))
        return Graph(self.n, [f for f in self.edges if f != e], self.names)


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def k4() -> Graph:
    return Graph(4, K4_EDGES)


def maximal_cliques(G: Graph) -> list[tuple]:
    return sorted(tuple(sorted(c)) for c in nx.find_cliques(G.to_networkx()))


def stable_set_polytope(G: Graph, cliques: Optional[Iterable[Iterable[int]]] = None) -> HPolyhedron:
    """Clique inequalities plus nonnegativity.

    This describes the stable set polytope only when ``G`` is perfect, which
    is left to the caller.
    """
    n = G.n
    if cliques is None:
        cliques = maximal_cliques(G)
    rows, rhs = [], []
    for K in cliques:
        K = set(K)
        rows.append([int(i in K) for i in range(n)])
        rhs.append(1)
    for i in range(n):
        rows.append([-int(i == j) for j in range(n)])
        rhs.append(0)
    return HPolyhedron(RatMatrix(rows, n), rhs)


def unfold_vertex(G: Graph, v, X: Iterable, Y: Iterable) -> Graph:
    """Replace ``v`` by ``x`` (adjacent to X), ``y`` (adjacent to Y) and ``z`` (adjacent to x, y)."""
    v = G.index(v)
    X = {G.index(a) for a in X}
    Y = {G.index(a) for a in Y}
    N = G.neighbors(v)
    if X | Y != N:
        raise ValueError(f"X and Y must cover exactly the neighborhood {sorted(G.names[u] for u in N)}")
    for a in X - Y:
        for b in Y - X:
            if G.adjacent(a, b):
                raise ValueError(f"edge {G.names[a]}-{G.names[b]} joins X\\Y and Y\\X")
    keep = [u for u in range(G.n) if u != v]
    pos = {u: i for i, u in enumerate(keep)}
    m = len(keep)
    x, y, z = m, m + 1, m + 2
    edges = [(pos[a], pos[b]) for a, b in G.edges if v not in (a, b)]
    edges += [(pos[a], x) for a in sorted(X)]
    edges += [(pos[a], y) for a in sorted(Y)]
    edges += [(x, z), (y, z)]
    names = [G.names[u] for u in keep]
    for s in ("x", "y", "z"):
        t = s
        while t in names:
            t += "'"
        names.append(t)
    return Graph(m + 3, edges, names)


S3_ORDER = ("b", "c", "v", "a", "d", "e")
S3_EDGES = (
    ("a", "b"), ("b", "d"), ("d", "v"), ("v", "b"), ("b", "c"),
    ("c", "v"), ("v", "e"), ("e", "c"), ("a", "c"),
)


def s3() -> Graph:
    return Graph.from_names(S3_ORDER, S3_EDGES)


def s3_unfolded(variant: bool = False) -> Graph:
    X = ("c", "e") if variant else ("b", "c", "e")
    return unfold_vertex(s3(), "v", X, ("b", "c", "d"))


# ---------------------------------------------------------------------------
# circuits, cuts and graph cones


def circuits(G: Graph) -> list[frozenset]:
    """Edge sets of all circuits, each found once from its least vertex."""
    eid = {e: i for i, e in enumerate(G.edges)}
    adj = {u: sorted(G.neighbors(u)) for u in range(G.n)}
    found = set()

    def eidx(a, b):
        return eid[(min(a, b), max(a, b))]

    def dfs(start, u, path_vertices, path_edges):
        for w in adj[u]:
            if w == start and len(path_vertices) >= 3:
                found.add(frozenset(path_edges + [eidx(u, w)]))
            elif w > start and w not in path_vertices:
                path_vertices.add(w)
                dfs(start, w, path_vertices, path_edges + [eidx(u, w)])
                path_vertices.discard(w)

    for s in range(G.n):
        dfs(s, s, {s}, [])
    return sorted(found, key=lambda c: (len(c), sorted(c)))


def cuts(G: Graph) -> list[frozenset]:
    """Nonempty edge cuts delta(S) over all bipartitions (S contains vertex 0)."""
    out = set()
    for mask in range(1 << (G.n - 1)):
        S = {0} | {i + 1 for i in range(G.n - 1) if mask >> i & 1}
        if len(S) == G.n:
            continue
        D = frozenset(i for i, (a, b) in enumerate(G.edges) if (a in S) != (b in S))
        if D:
            out.add(D)
    return sorted(out, key=lambda c: (len(c), sorted(c)))


def bonds(G: Graph) -> list[frozenset]:
    cs = cuts(G)
    return [D for D in cs if not any(E < D for E in cs)]


def circuit_cone(G: Graph, check: bool = True) -> tuple[VPolyhedron, HPolyhedron]:
    """Circuit cone as generators and through the cut description.

    The H-form uses ``x >= 0`` and ``x(D - e) >= x_e`` for all cuts ``D`` and
    ``e`` in ``D``.  With ``check`` both forms are compared exactly.
    """
    m = len(G.edges)
    gens = [tuple(Fraction(int(e in C)) for e in range(m)) for C in circuits(G)]
    zero = (Fraction(0),) * m
    V = VPolyhedron.from_generators([zero], gens, dim=m)
    rows = []
    for i in range(m):
        rows.append(tuple(-int(i == j) for j in range(m)))
    for D in cuts(G):
        for e in sorted(D):
            rows.append(tuple(1 if j == e else (-1 if j in D else 0) for j in range(m)))
    rows = list(dict.fromkeys(rows))
    H = HPolyhedron(RatMatrix(rows, m), [0] * len(rows))
    if check and not same_point_set(H, V):  # pragma: no cover
        raise AssertionError("cut description disagrees with the circuit generators")
    return V, H


def conservative_cone(G: Graph) -> HPolyhedron:
    """``{x : x(C) >= 0 for every circuit C}``."""
    m = len(G.edges)
    rows = [[-int(e in C) for e in range(m)] for C in circuits(G)]
    if not rows:
        return HPolyhedron.whole_space(m)
    return HPolyhedron(RatMatrix(rows, m), [0] * len(rows))


def is_series_parallel(G: Graph) -> bool:
    """No K4 minor, via degree-1, series and parallel reductions on a multigraph."""
    adj: dict[int, dict[int, int]] = {u: {} for u in range(G.n)}
    for a, b in G.edges:
        adj[a][b] = 1
        adj[b][a] = 1
    changed = True
    while changed:
        changed = False
        for u in list(adj):
            nbrs = adj[u]
            # parallel edges are kept as multiplicities and count as one here
            if len(nbrs) <= 1:
                for w in nbrs:
                    del adj[w][u]
                del adj[u]
                changed = True
            elif len(nbrs) == 2:
                a, b = nbrs
                del adj[a][u]
                del adj[b][u]
                del adj[u]
                adj[a][b] = adj[a].get(b, 0) + 1
                adj[b][a] = adj[b].get(a, 0) + 1
                changed = True
    return not adj


def named_instances() -> dict:
    """The worked examples as ready-made objects."""
    p5 = convex_hull([(0, 0, 0, 0, 0), (1, 1, 0, 0, 0), (1, 0, 1, 0, 0), (1, 0, 0, 1, 0), (1, 1, 1, 1, 1)])
    idp = HPolyhedron([[1, -1, -1], [-1, 1, -1], [-1, -1, 1], [1, 1, 1]], [0, 0, 0, 2])
    m_rows = [[1, 1, 0, 1, 0, 0], [1, 0, 1, 0, 1, 0], [0, 1, 1, 0, 0, 1]]
    K = k4()
    circ_v, circ_h = circuit_cone(K)
    return {
        "q6": q6(),
        "q7": q7(),
        "A_Q6": q6().matrix(),
        "M": RatMatrix(m_rows),
        "P_Q6": covering_polyhedron(q6()),
        "p5": p5,
        "p5_vertices": ((0, 0, 0, 0, 0), (1, 1, 0, 0, 0), (1, 0, 1, 0, 0), (1, 0, 0, 1, 0), (1, 1, 1, 1, 1)),
        "fbi_triangle": convex_hull([(2, -1), (-2, -1), (0, 1)]),
        "polar_triangle": convex_hull([(1, 1), (-1, 1), (0, -1)]),
        "idp_simplex": idp,
        "k4": K,
        "k4_circuit_cone": circ_h,
        "k4_circuit_generators": circ_v,
        "k4_conservative_cone": conservative_cone(K),
        "s3": s3(),
        "s3_unfolded": s3_unfolded(),
        "s3_unfolded_variant": s3_unfolded(variant=True),
        "cone_C": v_to_h(VPolyhedron.from_generators([(0, 0)], [(2, 1), (1, 0)])),
        "cone_C1": v_to_h(VPolyhedron.from_generators([(0, 0)], [(2, 1), (3, 1)])),
        "cone_C2": v_to_h(VPolyhedron.from_generators([(0, 0)], [(2, 1)])),
    }
