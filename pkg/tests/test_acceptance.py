"""Acceptance criteria, one check per criterion.

Each ``criterion_N`` returns ``(ok, detail)``.  Under pytest every criterion
is a test and its PASS/FAIL line is printed in the terminal summary; run the
file directly to print the lines without pytest.
"""

import functools
import itertools
import math
import random
import sys
import time
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from boxtdi.certify import (
    cone_box_integer,
    dilation_profile,
    extract_fractional_witness,
    is_box_integer,
    is_box_tdi,
    is_fully_box_integer,
    minimal_tangent_cone_verdict,
)
from boxtdi.exactalg import enumerate_maximal_submatrices, matrix, rank
from boxtdi.instances import (
    Graph,
    conservative_cone,
    covering_polyhedron,
    is_series_parallel,
    k4,
    maximal_cliques,
    named_instances,
    q6,
    s3,
    s3_unfolded,
    stable_set_polytope,
)
from boxtdi.matprops import ROUTES, is_equimodular, is_totally_equimodular, is_totally_unimodular
from boxtdi.polyhedra import (
    HPolyhedron,
    box_intersect,
    cone_from_generators,
    convex_hull,
    dilate,
    h_to_v,
    integer_points,
    is_integer,
    minimal_integer_dilation,
    polar,
)

F = Fraction


# ---------------------------------------------------------------------------
# shared corpora


def primitive_vectors(n, lo, hi):
    return [v for v in itertools.product(range(lo, hi + 1), repeat=n) if any(v) and math.gcd(*v) == 1]


@functools.lru_cache(maxsize=None)
def polytope_corpus():
    """Bounded, nonempty H-polytopes, deduplicated by vertex set.

    2D: three primitive rows from {-2..2}^2 with right-hand sides in {1, 2}.
    3D: four primitive rows from {-1..1}^3 with right-hand side 1.
    """
    seen, out = set(), []

    def add(rows, b):
        P = HPolyhedron(list(rows), list(b))
        V = P.vrep
        if V.is_empty or not V.is_bounded:
            return
        key = (P.n, frozenset(V.vertices))
        if key in seen:
            return
        seen.add(key)
        out.append(P)

    for rows in itertools.combinations(primitive_vectors(2, -2, 2), 3):
        for b in itertools.product((1, 2), repeat=3):
            add(rows, b)
    for rows in itertools.combinations(primitive_vectors(3, -1, 1), 4):
        add(rows, (1, 1, 1, 1))
    return tuple(out)


def matrix_grid(r, c=4, lo=-2, hi=2):
    """One representative per orbit of r x c matrices with entries in [lo, hi].

    Orbits are taken under column permutations, column negations, row
    permutations and row negations, all of which preserve every verdict of
    the six equimodularity routes.
    """
    cols = [v for v in itertools.product(range(lo, hi + 1), repeat=r) if not any(v) or next(x for x in v if x) > 0]
    idx = {v: i for i, v in enumerate(cols)}

    def canon(v):
        first = next((x for x in v if x), 0)
        return tuple(-x for x in v) if first < 0 else tuple(v)

    ops = []
    for perm in itertools.permutations(range(r)):
        for signs in itertools.product((1, -1), repeat=r):
            ops.append([idx[canon(tuple(signs[k] * col[perm[k]] for k in range(r)))] for col in cols])
    ops = np.array(ops)
    multisets = np.array(list(itertools.combinations_with_replacement(range(len(cols)), c)), dtype=np.int64)
    weights = len(cols) ** np.arange(c - 1, -1, -1)
    code = multisets @ weights
    keep = np.ones(len(multisets), bool)
    for g in ops:
        keep &= code <= np.sort(g[multisets], axis=1) @ weights
    return [[[cols[j][i] for j in m] for i in range(r)] for m in multisets[keep]]


def random_network_matrix(rnd):
    """Arc-vertex incidence rows (x_u - x_v) plus identity rows: always TU."""
    n = rnd.randint(2, 5)
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rnd.random() < 0.35] or [(0, 1)]
    rows = [[(w == u) - (w == v) for w in range(n)] for u, v in arcs]
    rows += [[int(i == j) for j in range(n)] for i in range(n)]
    rows += [[-int(i == j) for j in range(n)] for i in range(n)]
    return rows


def connected_graphs_up_to_iso(max_n=5):
    reps = []
    for n in range(3, max_n + 1):
        E = list(itertools.combinations(range(n), 2))
        for k in range(n - 1, len(E) + 1):
            for es in itertools.combinations(E, k):
                g = nx.Graph()
                g.add_nodes_from(range(n))
                g.add_edges_from(es)
                if nx.is_connected(g) and not any(nx.is_isomorphic(g, h) for h in reps):
                    reps.append(g)
    return [Graph(g.number_of_nodes(), sorted(g.edges())) for g in reps]


# ---------------------------------------------------------------------------
# criteria


def criterion_1():
    c = is_box_tdi(covering_polyhedron(q6()))
    if c.verdict:
        return False, "P_Q6 certified box-TDI"
    (c1, d1), (c2, d2) = c.refutation.pair
    dets = {abs(d1), abs(d2)}
    fdm = c.refutation.fdm
    minors = {abs(d) for _, d in enumerate_maximal_submatrices(fdm) if d}
    ok = dets == {2, 1} and minors == {1, 2}
    return ok, f"face {c.refutation.face.tight_rows}, |dets| {_fmt(dets)}, all nonzero |minors| {_fmt(minors)}"


def _fmt(values):
    return "{" + ", ".join(str(v) for v in sorted(values)) + "}"


def criterion_2():
    P = named_instances()["p5"]
    v1 = is_box_integer(P)
    P2 = dilate(P, 2)
    v2 = is_box_integer(P2)
    target = (2, 1, 1, 1, F(1, 2))
    box = ([None, 1, 1, 1, None], [None, 1, 1, 1, None])
    in_box = target in {tuple(v) for v in h_to_v(box_intersect(P2, *box)).vertices}
    w = v2.witness
    ok = (
        v1.is_box_integer
        and v1.exact
        and not v2.is_box_integer
        and w.validate(P2)
        and w.vertex == target
        and (list(w.l), list(w.u)) == box
        and in_box
    )
    return ok, f"P5 box-integer={v1.is_box_integer}; 2P5 witness {tuple(map(str, w.vertex)) if w else None} box l=u={w.l if w else None}"


def criterion_3():
    p = dilation_profile(named_instances()["p5"], k_max=4)
    ok = (p.case, p.d, p.q) == ("iii", 1, 1)
    return ok, f"case {p.case}, d={p.d}, q={p.q}, observed {[b for _, b in p.observed]}"


def criterion_4():
    fbi = convex_hull([(2, -1), (-2, -1), (0, 1)])
    pol = convex_hull([(1, 1), (-1, 1), (0, -1)])
    a = is_fully_box_integer(fbi)
    b = is_integer(pol)
    c = is_box_integer(pol).is_box_integer
    return a and b and not c, f"fully box-integer={a}; polar triangle integer={b}, box-integer={c}"


def criterion_5():
    rnd = random.Random(2024)
    n = 0
    disagree = 0
    true_count = 0
    while n < 120:
        k = rnd.randint(1, 4)
        # half of the cones use small entries so both verdicts occur often
        lim = 1 if n % 2 else 3
        gens = [tuple(rnd.randint(-lim, lim) for _ in range(3)) for _ in range(k)]
        gens = [g for g in gens if any(g)]
        if not gens:
            continue
        C = cone_from_generators(gens, dim=3)
        a = cone_box_integer(C).is_box_integer
        b = cone_box_integer(polar(C)).is_box_integer
        disagree += a != b
        true_count += a
        n += 1
    return disagree == 0, f"{n} cones, {disagree} discrepancies, {true_count} box-integer"


def criterion_6():
    corpus = polytope_corpus()
    bad = []
    n_true = 0
    for P in corpus:
        c = is_box_tdi(P)
        d = minimal_integer_dilation(P)
        dil = [is_box_integer(dilate(P, k * d)).is_box_integer for k in (1, 2, 3)]
        if c.verdict != all(dil):
            bad.append(("verdict", P.A.tolist(), P.b))
            continue
        if c.verdict:
            n_true += 1
        else:
            try:
                w = extract_fractional_witness(P, c)
                if not w.validate(P):
                    bad.append(("witness", P.A.tolist(), P.b))
            except Exception as exc:  # noqa: BLE001
                bad.append((repr(exc), P.A.tolist(), P.b))
    return not bad and len(corpus) >= 500, (
        f"{len(corpus)} polytopes ({n_true} box-TDI), {len(bad)} discrepancies" + (f", first {bad[0]}" if bad else "")
    )


def criterion_7():
    rnd = random.Random(7)
    done = fails = 0
    while done < 50:
        rows = random_network_matrix(rnd)
        if not is_totally_unimodular(rows).is_tu:
            return False, f"generator produced a non-TU matrix {rows}"
        b = [rnd.randint(-1, 3) for _ in rows]
        P = HPolyhedron(rows, b)
        if P.is_empty:
            continue
        fails += not is_box_tdi(P).verdict
        done += 1
    return fails == 0, f"{done} TU-described polyhedra, {fails} not certified box-TDI"


def criterion_8():
    G = s3()
    P = stable_set_polytope(G)
    c = is_box_tdi(P)
    outer = [tuple(sorted(G.index(x) for x in t)) for t in (("a", "b", "c"), ("b", "d", "v"), ("c", "v", "e"))]
    cliques = maximal_cliques(G)
    rows = tuple(sorted(cliques.index(t) for t in outer))
    ok1 = not c.verdict and c.refutation.face.tight_rows == rows
    dets = {abs(d) for _, d in c.refutation.pair} if not c.verdict else set()
    ok1 = ok1 and dets == {1, 2}
    Gv = s3_unfolded()
    ok2 = not is_box_tdi(stable_set_polytope(Gv)).verdict
    Gz = Gv.remove_vertex("z")
    Pz = stable_set_polytope(Gz)
    ok3 = is_box_tdi(Pz).verdict and is_totally_unimodular(Pz.A).is_tu
    return ok1 and ok2 and ok3, f"S3 refuted on cliques {rows} with |dets| {_fmt(dets)}; G^v refuted={ok2}; G^v - z box-TDI={ok3}"


def criterion_9():
    C = conservative_cone(k4())
    c = is_box_tdi(C)
    M = named_instances()["M"]
    ok_k4 = not c.verdict and c.refutation.fdm in (M, -M)
    k4e = k4().delete_edge((0, 1))
    ok_k4e = is_box_tdi(conservative_cone(k4e)).verdict
    graphs = connected_graphs_up_to_iso(5)
    mismatches = []
    sp = 0
    for G in graphs:
        s = is_series_parallel(G)
        sp += s
        if is_box_tdi(conservative_cone(G)).verdict != s:
            mismatches.append(G.edges)
    ok = ok_k4 and ok_k4e and not mismatches
    return ok, (
        f"K4 refuted with fdm = {'-M' if c.refutation and c.refutation.fdm == -M else 'M'}; K4 - e box-TDI={ok_k4e}; "
        f"{len(graphs)} connected graphs on <= 5 vertices ({sp} series-parallel), {len(mismatches)} mismatches"
    )


def criterion_10():
    P = named_instances()["idp_simplex"]
    tem = is_totally_equimodular(P.A).is_totally_equimodular
    fbi = is_fully_box_integer(P)
    pts = integer_points(P)
    target = (1, 1, 1)
    in_2p = dilate(P, 2).contains(target)
    split = any(tuple(a + b for a, b in zip(p, q)) == target for p in pts for q in pts)
    ok = tem and fbi and in_2p and not split
    return ok, f"totally equimodular={tem}; fully box-integer={fbi}; (1,1,1) in 2P={in_2p}, sum of two points of P={split}"


def criterion_11():
    total = 0
    disagreements = []
    for r in (2, 3):
        for rows in matrix_grid(r):
            A = matrix(rows)
            if rank(A) < r:
                continue
            total += 1
            verdicts = {route: is_equimodular(A, route=route).is_equimodular for route in ROUTES}
            if len(set(verdicts.values())) != 1:
                disagreements.append((rows, verdicts))
    return not disagreements, f"{total} full-row-rank orbit representatives (2x4 and 3x4), {len(disagreements)} disagreements"


def criterion_12():
    corpus = polytope_corpus()
    bad = sum(is_box_tdi(P).verdict != minimal_tangent_cone_verdict(P) for P in corpus)
    return bad == 0, f"{len(corpus)} polytopes, {bad} discrepancies"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run_criterion(i):
    t = time.perf_counter()
    ok, detail = CRITERIA[i]()
    line = f"criterion {i:2d}: {'PASS' if ok else 'FAIL'} ({time.perf_counter() - t:.1f}s) {detail}"
    return ok, line


@pytest.mark.parametrize("i", range(1, 13))
def test_criterion(i):
    import conftest

    ok, line = run_criterion(i)
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(i) for i in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
