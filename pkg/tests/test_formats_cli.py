import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from boxtdi.cli import main
from boxtdi.exactalg import RatMatrix
from boxtdi.formats import (
    ParseError,
    read_clutter,
    read_graph,
    read_matrix,
    read_polyhedron,
    to_json,
    write_text,
)
from boxtdi.instances import Clutter, Graph, named_instances, q7
from boxtdi.polyhedra import HPolyhedron, VPolyhedron, same_point_set

NAMED = named_instances()


def run(argv, stdin_text=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin_text is not None:
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin_text.encode())))
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# --- formats


def test_matrix_round_trip():
    M = RatMatrix([[1, Fraction(-2, 3)], [0, 5]])
    assert read_matrix(write_text(M)) == M
    assert read_matrix(json.dumps(to_json(M))) == M


def test_matrix_comments_and_blank_lines():
    text = "# a matrix\n2 2\n\n1 0  # first row\n0 1\n"
    assert read_matrix(text) == RatMatrix.identity(2)


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("2 2\n1 0\n0 x\n", 3, 3),
        ("2 2\n1 0 3\n0 1\n", 2, 5),
        ("2 2\n1 0\n", 2, 1),
        ("2\n", 1, 2),
        ("1 1\n1/0\n", 2, 1),
        ("1 1\n1\n7\n", 3, 1),
    ],
)
def test_matrix_parse_errors(text, line, col):
    with pytest.raises(ParseError) as exc:
        read_matrix(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_polyhedron_round_trips():
    for name in ("P_Q6", "p5", "idp_simplex", "k4_conservative_cone"):
        P = NAMED[name]
        Q = read_polyhedron(write_text(P))
        assert Q == P
        R = read_polyhedron(json.dumps(to_json(P)))
        assert R == P
    V = NAMED["k4_circuit_generators"]
    assert read_polyhedron(write_text(V)) == V
    assert read_polyhedron(json.dumps(to_json(V))) == V


def test_vpolyhedron_text():
    text = "2\nvertices 1\n0 0\nrays 2\n2 1\n1 0\n"
    Q = read_polyhedron(text)
    assert isinstance(Q, VPolyhedron)
    assert Q.rays == ((2, 1), (1, 0))
    with pytest.raises(ParseError):
        read_polyhedron("2\nvertex 1\n0 0\n")


def test_graph_and_clutter_round_trip():
    G = Graph(4, [(0, 1), (1, 2), (2, 3)])
    assert read_graph(write_text(G)).edges == G.edges
    assert read_graph(json.dumps(to_json(G))).edges == G.edges
    C = q7()
    assert read_clutter(write_text(C)).members == C.members
    assert read_clutter(json.dumps(to_json(C))).members == C.members
    with pytest.raises(ParseError) as exc:
        read_graph("3\n0 1\n1 3\n")
    assert (exc.value.line, exc.value.col) == (3, 3)
    with pytest.raises(ParseError):
        read_clutter("3\n0 1\n0\n")  # {0} is contained in {0, 1}
    assert read_clutter("2\n0\n1\n").members == Clutter(2, [[0], [1]]).members


def test_json_errors():
    with pytest.raises(ParseError):
        read_matrix('{"rows": [[1]]}')
    with pytest.raises(ParseError):
        read_matrix('{"type": "matrix", "rows": [[1, 2], [3]]}')
    with pytest.raises(ParseError):
        read_polyhedron('{"type": "hpolyhedron", "A": [[1]], "b": []}')
    with pytest.raises(ParseError):
        read_matrix("{not json")


def test_to_json_uses_exact_strings():
    d = to_json(RatMatrix([[Fraction(1, 2)]]))
    assert d["rows"] == [["1/2"]]


# --- cli


def test_gen_q6_pipe_to_polycheck(monkeypatch):
    code, text, _ = run(["gen", "q6"])
    assert code == 0
    code, out, _ = run(["polycheck", "--property", "box-tdi"], text, monkeypatch)
    assert code == 1
    report = json.loads(out)
    assert report["schema"] == 1 and report["verdict"] == "refuted"
    dets = {abs(Fraction(m["det"])) for m in report["certificate"]["refutation"]["minors"]}
    assert dets == {1, 2}
    assert "timing" not in report


def test_report_is_reproducible(monkeypatch):
    _, text, _ = run(["gen", "p5", "--format", "text"])
    a = run(["polycheck", "--property", "box-integer", "-"], text, monkeypatch)
    b = run(["polycheck", "--property", "box-integer", "-"], text, monkeypatch)
    assert a == b and a[0] == 0
    c = run(["polycheck", "--property", "box-integer", "--timing", "-"], text, monkeypatch)
    assert "timing" in json.loads(c[1])


def test_matcheck_identity(tmp_path):
    path = write(tmp_path, "id.txt", "3 3\n1 0 0\n0 1 0\n0 0 1\n")
    code, out, _ = run(["matcheck", "--property", "tu", path])
    assert code == 0 and json.loads(out)["verdict"] == "holds"
    for prop in ("equimodular", "unimodular", "totally-equimodular"):
        assert run(["matcheck", "--property", prop, path])[0] == 0


def test_matcheck_refutation(tmp_path):
    path = write(tmp_path, "m.txt", write_text(NAMED["M"]))
    code, out, _ = run(["matcheck", "--property", "equimodular", "--route", "3", path])
    assert code == 1
    cert = json.loads(out)["certificate"]
    assert [m["columns"] for m in cert["minors"]] == [[0, 1, 2], [0, 1, 3]]
    assert {abs(int(m["det"])) for m in cert["minors"]} == {1, 2}


def test_matcheck_rank_deficient(tmp_path):
    path = write(tmp_path, "r.txt", "2 2\n1 2\n2 4\n")
    code, _, err = run(["matcheck", "--property", "equimodular", path])
    assert code == 65 and "invalid input" in err
    assert run(["matcheck", "--property", "equimodular", "--extended", path])[0] == 1


def test_profile_p5(monkeypatch):
    _, text, _ = run(["gen", "p5"])
    code, out, _ = run(["profile", "--kmax", "4"], text, monkeypatch)
    cert = json.loads(out)["certificate"]
    assert (cert["case"], cert["d"], cert["q"]) == ("iii", 1, 1)
    assert code == 1


def test_witness_p5(monkeypatch):
    _, text, _ = run(["gen", "p5"])
    code, out, _ = run(["witness"], text, monkeypatch)
    w = json.loads(out)["certificate"]["witness"]
    assert code == 1
    assert w["k"] == 2 and w["vertex"] == ["2", "1", "1", "1", "1/2"]


def test_polycheck_indeterminate(tmp_path):
    path = write(tmp_path, "orth.txt", "2 2\n-1 0\n0 -1\n0 0\n")
    assert run(["polycheck", "--property", "box-integer", path])[0] == 2
    assert run(["polycheck", "--property", "box-tdi", path])[0] == 0
    assert run(["polycheck", "--property", "cone-box-integer", path])[0] == 0


def test_polycheck_non_cone(tmp_path):
    path = write(tmp_path, "tri.txt", write_text(NAMED["polar_triangle"]))
    code, _, err = run(["polycheck", "--property", "cone-box-integer", path])
    assert code == 65


def test_polycheck_text_format(tmp_path):
    path = write(tmp_path, "tri.txt", write_text(NAMED["fbi_triangle"]))
    code, out, _ = run(["polycheck", "--property", "fully-box-integer", "--format", "text", path])
    assert code == 0 and out.startswith("polycheck: holds")


def test_gen_with_input_files(tmp_path):
    g = write(tmp_path, "g.txt", "3\n0 1\n1 2\n0 2\n")
    code, out, _ = run(["gen", "stable-set", g, "--format", "text"])
    assert code == 0
    P = read_polyhedron(out)
    assert same_point_set(P, HPolyhedron([[1, 1, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]], [1, 0, 0, 0]))
    c = write(tmp_path, "c.txt", "2\n0 1\n")
    out_path = tmp_path / "cov.txt"
    assert run(["gen", "covering", c, "-o", str(out_path), "--format", "text"])[0] == 0
    assert read_polyhedron(out_path.read_text()).m == 3


def test_usage_errors(tmp_path):
    assert run([])[0] == 64
    assert run(["frobnicate"])[0] == 64
    assert run(["matcheck", "x"])[0] == 64
    assert run(["gen", "stable-set"])[0] == 64
    assert run(["matcheck", "--property", "tu", str(tmp_path / "missing.txt")])[0] == 64


def test_malformed_input_reports_position(tmp_path):
    path = write(tmp_path, "bad.txt", "2 2\n1 0\n0 x\n")
    code, _, err = run(["matcheck", "--property", "tu", path])
    assert code == 65
    assert "line 3, column 3" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "boxtdi", "gen", "idp-simplex", "--format", "text"],
        capture_output=True, text=True, check=True,
    )
    assert read_polyhedron(proc.stdout) == NAMED["idp_simplex"]
