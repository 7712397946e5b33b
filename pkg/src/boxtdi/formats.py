"""Plain-text and JSON readers/writers for matrices, polyhedra, graphs and clutters.

Text formats (``#`` starts a comment, blank lines are ignored)::

    matrix       "rows cols", then one line of entries per row
    H-polyhedron matrix block, then one line with the right-hand side
    V-polyhedron "n", then blocks "vertices k" / "rays k" / "lineality k"
    graph        vertex count, then one "u v" pair per line
    clutter      ground set size, then one member (element list) per line

Entries are integers or ``p/q`` rationals.  A document starting with ``{`` is
read as JSON with a ``type`` field naming one of the kinds above.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from .exactalg import RatMatrix, fmt
from .instances import Clutter, Graph
from .polyhedra import HPolyhedron, VPolyhedron


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass
class _Token:
    text: str
    line: int
    col: int


def _lines(text: str) -> list[list[_Token]]:
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in body.split():
            col = body.index(part, col)
            toks.append(_Token(part, ln, col + 1))
            col += len(part)
        if toks:
            out.append(toks)
    return out


def _rational(tok: _Token) -> Fraction:
    try:
        return Fraction(tok.text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a rational number, got {tok.text!r}", tok.line, tok.col) from None


def _int(tok: _Token, minimum: int = 0) -> int:
    try:
        v = int(tok.text)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok.text!r}", tok.line, tok.col) from None
    if v < minimum:
        raise ParseError(f"expected an integer >= {minimum}, got {v}", tok.line, tok.col)
    return v


class _Reader:
    def __init__(self, text: str):
        self.lines = _lines(text)
        self.pos = 0
        self.last_line = len(text.splitlines()) or 1

    def next(self, what: str) -> list[_Token]:
        if self.pos >= len(self.lines):
            raise ParseError(f"unexpected end of input, expected {what}", self.last_line, 1)
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def peek(self):
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def done(self) -> None:
        if self.pos < len(self.lines):
            t = self.lines[self.pos][0]
            raise ParseError("unexpected trailing content", t.line, t.col)


def _exact_count(toks: list[_Token], k: int, what: str) -> None:
    if len(toks) != k:
        t = toks[min(len(toks), k) - 1] if len(toks) > k else toks[-1]
        col = toks[k].col if len(toks) > k else t.col + len(t.text)
        raise ParseError(f"expected {k} {what}, got {len(toks)}", t.line, col)


def _read_matrix(r: _Reader) -> RatMatrix:
    head = r.next("a 'rows cols' header")
    _exact_count(head, 2, "header fields (rows cols)")
    m, n = _int(head[0]), _int(head[1])
    rows = []
    for _ in range(m):
        toks = r.next(f"a row of {n} entries")
        _exact_count(toks, n, "entries")
        rows.append([_rational(t) for t in toks])
    return RatMatrix(rows, n)


def _json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "type" not in data:
        raise ParseError("JSON input must be an object with a 'type' field", 1, 1)
    return data


def _jrat(x: Any) -> Fraction:
    try:
        return Fraction(x) if not isinstance(x, float) else Fraction(str(x))
    except (ValueError, ZeroDivisionError, TypeError):
        raise ParseError(f"bad rational {x!r}", 1, 1) from None


def _jmatrix(rows: Any, cols: Union[int, None] = None) -> RatMatrix:
    if not isinstance(rows, list):
        raise ParseError("matrix must be a list of rows", 1, 1)
    data = [[_jrat(x) for x in r] for r in rows]
    if cols is None:
        cols = len(data[0]) if data else 0
    if any(len(r) != cols for r in data):
        raise ParseError("ragged matrix rows", 1, 1)
    return RatMatrix(data, cols)


def _is_json(text: str) -> bool:
    return text.lstrip().startswith("{")


# ---------------------------------------------------------------------------
# readers


def read_matrix(text: str) -> RatMatrix:
    if _is_json(text):
        d = _json(text)
        return _jmatrix(d.get("rows"), d.get("cols"))
    r = _Reader(text)
    M = _read_matrix(r)
    r.done()
    return M


def read_polyhedron(text: str) -> Union[HPolyhedron, VPolyhedron]:
    """H- or V-polyhedron; the text header decides (two fields vs one)."""
    if _is_json(text):
        d = _json(text)
        kind = d["type"]
        if kind == "hpolyhedron":
            A = _jmatrix(d.get("A"), d.get("n"))
            b = [_jrat(x) for x in d.get("b", [])]
            if len(b) != A.rows:
                raise ParseError("length of b does not match the rows of A", 1, 1)
            return HPolyhedron(A, b) if A.rows else HPolyhedron.whole_space(A.cols)
        if kind == "vpolyhedron":
            n = int(d["dim"])
            blocks = {k: [tuple(_jrat(x) for x in g) for g in d.get(k, [])] for k in ("vertices", "rays", "lineality")}
            for gens in blocks.values():
                if any(len(g) != n for g in gens):
                    raise ParseError("generator of the wrong dimension", 1, 1)
            return VPolyhedron(n, tuple(blocks["vertices"]), tuple(blocks["rays"]), tuple(blocks["lineality"]))
        raise ParseError(f"expected a polyhedron, got type {kind!r}", 1, 1)
    r = _Reader(text)
    head = r.peek()
    if head is None:
        raise ParseError("empty input", 1, 1)
    if len(head) == 1:
        return _read_v(r)
    A = _read_matrix(r)
    toks = r.next("the right-hand side line") if A.rows else []
    if A.rows:
        _exact_count(toks, A.rows, "right-hand side entries")
    r.done()
    b = [_rational(t) for t in toks]
    return HPolyhedron(A, b) if A.rows else HPolyhedron.whole_space(A.cols)


def _read_v(r: _Reader) -> VPolyhedron:
    head = r.next("the dimension")
    n = _int(head[0])
    blocks = {"vertices": [], "rays": [], "lineality": []}
    while r.peek() is not None:
        toks = r.next("a block header")
        name = toks[0].text
        if name not in blocks or len(toks) != 2:
            raise ParseError("expected 'vertices k', 'rays k' or 'lineality k'", toks[0].line, toks[0].col)
        for _ in range(_int(toks[1])):
            g = r.next(f"a {name} row")
            _exact_count(g, n, "coordinates")
            blocks[name].append(tuple(_rational(t) for t in g))
    return VPolyhedron(n, tuple(blocks["vertices"]), tuple(blocks["rays"]), tuple(blocks["lineality"]))


def read_graph(text: str) -> Graph:
    if _is_json(text):
        d = _json(text)
        try:
            return Graph(int(d["n"]), [tuple(e) for e in d.get("edges", [])], d.get("names", ()))
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(str(exc), 1, 1) from None
    r = _Reader(text)
    head = r.next("the vertex count")
    _exact_count(head, 1, "fields (vertex count)")
    n = _int(head[0])
    edges = []
    while r.peek() is not None:
        toks = r.next("an edge")
        _exact_count(toks, 2, "endpoints")
        u, v = _int(toks[0]), _int(toks[1])
        for t, x in zip(toks, (u, v)):
            if x >= n:
                raise ParseError(f"vertex {x} out of range 0..{n - 1}", t.line, t.col)
        try:
            edges.append((u, v))
            Graph(n, edges)
        except ValueError as exc:
            raise ParseError(str(exc), toks[0].line, toks[0].col) from None
    return Graph(n, edges)


def read_clutter(text: str) -> Clutter:
    if _is_json(text):
        d = _json(text)
        try:
            return Clutter(int(d["ground"]), d.get("members", []))
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(str(exc), 1, 1) from None
    r = _Reader(text)
    head = r.next("the ground set size")
    _exact_count(head, 1, "fields (ground set size)")
    ground = _int(head[0])
    members = []
    while r.peek() is not None:
        toks = r.next("a member")
        m = []
        for t in toks:
            x = _int(t)
            if x >= ground:
                raise ParseError(f"element {x} out of range 0..{ground - 1}", t.line, t.col)
            m.append(x)
        members.append(m)
    try:
        return Clutter(ground, members)
    except ValueError as exc:
        raise ParseError(str(exc), head[0].line, head[0].col) from None


# ---------------------------------------------------------------------------
# writers


def _row(values) -> str:
    return " ".join(fmt(x) for x in values)


def write_matrix(M: RatMatrix) -> str:
    return "\n".join([f"{M.rows} {M.cols}"] + [_row(r) for r in M.row_tuples()]) + "\n"


def write_hpolyhedron(P: HPolyhedron) -> str:
    text = write_matrix(P.A)
    return text + (_row(P.b) + "\n" if P.m else "")


def write_vpolyhedron(Q: VPolyhedron) -> str:
    out = [str(Q.dim)]
    for name in ("vertices", "rays", "lineality"):
        gens = getattr(Q, name)
        out.append(f"{name} {len(gens)}")
        out.extend(_row(g) for g in gens)
    return "\n".join(out) + "\n"


def write_graph(G: Graph) -> str:
    return "\n".join([str(G.n)] + [f"{a} {b}" for a, b in G.edges]) + "\n"


def write_clutter(C: Clutter) -> str:
    return "\n".join([str(C.ground)] + [" ".join(map(str, sorted(m))) for m in C.members]) + "\n"


def to_json(obj) -> dict:
    """JSON-ready dict for the supported objects, rationals as ``p/q`` strings."""
    if isinstance(obj, RatMatrix):
        return {"type": "matrix", "cols": obj.cols, "rows": [[fmt(x) for x in r] for r in obj.row_tuples()]}
    if isinstance(obj, HPolyhedron):
        return {
            "type": "hpolyhedron",
            "n": obj.n,
            "A": [[fmt(x) for x in r] for r in obj.A.row_tuples()],
            "b": [fmt(x) for x in obj.b],
        }
    if isinstance(obj, VPolyhedron):
        d = {"type": "vpolyhedron", "dim": obj.dim}
        for name in ("vertices", "rays", "lineality"):
            d[name] = [[fmt(x) for x in g] for g in getattr(obj, name)]
        return d
    if isinstance(obj, Graph):
        return {"type": "graph", "n": obj.n, "edges": [list(e) for e in obj.edges], "names": list(obj.names)}
    if isinstance(obj, Clutter):
        return {"type": "clutter", "ground": obj.ground, "members": [sorted(m) for m in obj.members]}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_text(obj) -> str:
    if isinstance(obj, HPolyhedron):
        return write_hpolyhedron(obj)
    if isinstance(obj, VPolyhedron):
        return write_vpolyhedron(obj)
    if isinstance(obj, RatMatrix):
        return write_matrix(obj)
    if isinstance(obj, Graph):
        return write_graph(obj)
    if isinstance(obj, Clutter):
        return write_clutter(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
