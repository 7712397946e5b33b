"""Command-line front end.

Subcommands ``matcheck``, ``polycheck``, ``profile``, ``witness`` print a JSON
report (or a short text summary with ``--format text``); ``gen`` writes an
instance.  Exit codes: 0 property holds, 1 refuted, 2 indeterminate, 64 usage
error, 65 malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Optional, Sequence

from . import certify, instances, matprops
from .exactalg import RatMatrix, fmt
from .formats import ParseError, read_clutter, read_graph, read_matrix, read_polyhedron, to_json, write_text
from .polyhedra import Face, HPolyhedron, VPolyhedron, is_integer, v_to_h

EXIT_HOLDS, EXIT_REFUTED, EXIT_INDETERMINATE = 0, 1, 2
EXIT_USAGE, EXIT_DATAERR = 64, 65
SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(message)


# ---------------------------------------------------------------------------
# JSON helpers


def _mat(M: RatMatrix) -> list:
    return [[fmt(x) for x in r] for r in M.row_tuples()]


def _vec(v) -> list:
    return [fmt(x) for x in v]


def _bound(x) -> Optional[str]:
    return None if x is None else fmt(x)


def _face(F: Face) -> dict:
    return {"tight_rows": list(F.tight_rows), "dim": F.dim, "fdm": _mat(F.fdm), "fdm_rhs": _vec(F.fdm_rhs)}


def _pair(pair) -> list:
    return [{"columns": list(cols), "det": fmt(d)} for cols, d in pair]


def _witness(w: certify.FractionalVertexWitness) -> dict:
    return {"k": w.k, "l": [_bound(x) for x in w.l], "u": [_bound(x) for x in w.u], "vertex": _vec(w.vertex)}


def _tdi_cert(c: certify.BoxTDICertificate) -> dict:
    out = {"box_tdi": c.verdict, "cross_checked": c.cross_checked}
    if c.verdict:
        out["faces"] = [{"face": _face(F), "tu_matrix": _mat(T)} for F, T in c.per_face_witnesses]
    else:
        out["refutation"] = {"face": _face(c.refutation.face), "fdm": _mat(c.refutation.fdm), "minors": _pair(c.refutation.pair)}
    return out


# ---------------------------------------------------------------------------
# input


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("input is not UTF-8", 1, exc.start + 1) from None


def _as_h(P) -> HPolyhedron:
    return v_to_h(P) if isinstance(P, VPolyhedron) else P


# ---------------------------------------------------------------------------
# commands; each returns (exit code, certificate dict)


def _cmd_matcheck(args, text):
    A = read_matrix(text)
    prop = args.property
    if prop == "tu":
        v = matprops.is_totally_unimodular(A)
        cert = {"tu": v.is_tu}
        if not v:
            rows, cols, d = v.violating_submatrix
            cert["violating_submatrix"] = {"rows": list(rows), "columns": list(cols), "det": fmt(d)}
        return (EXIT_HOLDS if v else EXIT_REFUTED), cert
    if prop == "equimodular":
        v = matprops.is_equimodular(A, route=args.route, extended=args.extended)
        cert = {"equimodular": v.is_equimodular, "route": v.route}
        if v:
            cert["common_abs_det"] = fmt(v.common_abs_det)
        else:
            cert["minors"] = _pair(v.refutation)
        return (EXIT_HOLDS if v else EXIT_REFUTED), cert
    if prop == "unimodular":
        ok = matprops.is_unimodular(A)
        return (EXIT_HOLDS if ok else EXIT_REFUTED), {"unimodular": ok}
    v = matprops.is_totally_equimodular(A)
    cert = {"totally_equimodular": v.is_totally_equimodular, "checked_subsets": v.checked_subsets}
    if not v:
        cert["offending_rows"] = list(v.offending_rows)
        cert["minors"] = _pair(v.refutation.refutation)
    return (EXIT_HOLDS if v else EXIT_REFUTED), cert


def _profile(P, kmax, window):
    prof = certify.dilation_profile(P, kmax, window)
    cert = {
        "d": prof.d,
        "case": prof.case,
        "q": prof.q,
        "monotone": prof.monotone,
        "observed": [{"k": k, "box_integer": b} for k, b in prof.observed],
    }
    return (EXIT_HOLDS if prof.case == "i" else EXIT_REFUTED if prof.exact else EXIT_INDETERMINATE), cert


def _cmd_polycheck(args, text):
    P = _as_h(read_polyhedron(text))
    prop = args.property
    if prop == "box-tdi":
        c = certify.is_box_tdi(P, cross_check=args.cross_check)
        return (EXIT_HOLDS if c else EXIT_REFUTED), _tdi_cert(c)
    if prop == "box-integer":
        v = certify.is_box_integer(P, args.window)
        cert = {"box_integer": v.is_box_integer, "exact": v.exact, "window": args.window}
        if v.witness:
            cert["witness"] = _witness(v.witness)
        code = EXIT_REFUTED if not v else (EXIT_HOLDS if v.exact else EXIT_INDETERMINATE)
        return code, cert
    if prop == "fully-box-integer":
        c = certify.is_box_tdi(P, cross_check=args.cross_check)
        integer = is_integer(P)
        cert = {"fully_box_integer": c.verdict and integer, "integer": integer, "box_tdi": _tdi_cert(c)}
        return (EXIT_HOLDS if c.verdict and integer else EXIT_REFUTED), cert
    if prop == "integer":
        ok = is_integer(P)
        return (EXIT_HOLDS if ok else EXIT_REFUTED), {"integer": ok}
    if prop == "profile":
        return _profile(P, args.kmax, args.window)
    if prop == "cone-box-integer":
        v = certify.cone_box_integer(P)
        cert = {"cone_box_integer": v.is_box_integer}
        if not v:
            cert["generators"] = [_vec(g) for g in v.offending_generators]
            cert["minors"] = _pair(v.refutation)
        return (EXIT_HOLDS if v else EXIT_REFUTED), cert
    # box-property
    v = certify.cone_box_property(P, args.samples, args.window)
    cert = {"box_property": v.holds, "samples": v.samples}
    if not v:
        cert["witness"] = _vec(v.witness)
    return (EXIT_INDETERMINATE if v else EXIT_REFUTED), cert


def _cmd_profile(args, text):
    return _profile(_as_h(read_polyhedron(text)), args.kmax, args.window)


def _cmd_witness(args, text):
    P = _as_h(read_polyhedron(text))
    c = certify.is_box_tdi(P)
    if c:
        return EXIT_HOLDS, {"box_tdi": True, "witness": None}
    w = certify.extract_fractional_witness(P, c, args.kfactor)
    return EXIT_REFUTED, {"box_tdi": False, "refutation": _tdi_cert(c)["refutation"], "witness": _witness(w)}


GEN_NAMES = (
    "q6", "q7", "p5", "s3", "s3-unfolded", "s3-unfolded-variant", "k4-cons-cone",
    "k4-circuit-cone", "idp-simplex", "stable-set", "covering",
)


def _generate(args):
    name = args.name
    if name in ("stable-set", "covering"):
        if not args.input:
            raise UsageError(f"gen {name} needs an input file")
        text = _decode(_read(args.input))
        if name == "stable-set":
            return instances.stable_set_polytope(read_graph(text))
        return instances.covering_polyhedron(read_clutter(text))
    if args.input:
        raise UsageError(f"gen {name} takes no input file")
    named = instances.named_instances()
    table = {
        "q6": lambda: instances.covering_polyhedron(named["q6"]),
        "q7": lambda: instances.covering_polyhedron(named["q7"]),
        "p5": lambda: named["p5"],
        "s3": lambda: instances.stable_set_polytope(named["s3"]),
        "s3-unfolded": lambda: instances.stable_set_polytope(named["s3_unfolded"]),
        "s3-unfolded-variant": lambda: instances.stable_set_polytope(named["s3_unfolded_variant"]),
        "k4-cons-cone": lambda: named["k4_conservative_cone"],
        "k4-circuit-cone": lambda: named["k4_circuit_cone"],
        "idp-simplex": lambda: named["idp_simplex"],
    }
    return table[name]()


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")

    p = _Parser(prog="boxtdi", description="Exact box-TDI and box-integrality checks.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    m = sub.add_parser("matcheck", parents=[common], help="matrix properties")
    m.add_argument("--property", choices=("tu", "equimodular", "unimodular", "totally-equimodular"), required=True)
    m.add_argument("--route", type=int, choices=sorted(matprops.ROUTES), default=matprops.DEFAULT_ROUTE)
    m.add_argument("--extended", action="store_true", help="accept rank-deficient input")
    m.add_argument("file")

    pc = sub.add_parser("polycheck", parents=[common], help="polyhedron properties")
    pc.add_argument(
        "--property",
        choices=("box-tdi", "box-integer", "fully-box-integer", "integer", "profile", "box-property", "cone-box-integer"),
        required=True,
    )
    pc.add_argument("--window", type=int, default=certify.DEFAULT_WINDOW)
    pc.add_argument("--kmax", type=int, default=4)
    pc.add_argument("--samples", type=int, default=certify.DEFAULT_SAMPLES)
    pc.add_argument("--cross-check", action="store_true")
    pc.add_argument("file", nargs="?", default="-")

    pr = sub.add_parser("profile", parents=[common], help="dilation profile")
    pr.add_argument("--kmax", type=int, default=4)
    pr.add_argument("--window", type=int, default=certify.DEFAULT_WINDOW)
    pr.add_argument("file", nargs="?", default="-")

    w = sub.add_parser("witness", parents=[common], help="fractional vertex witness")
    w.add_argument("--kfactor", type=int, default=certify.DEFAULT_K_FACTOR)
    w.add_argument("file", nargs="?", default="-")

    g = sub.add_parser("gen", parents=[common], help="write a named instance")
    g.add_argument("name", choices=GEN_NAMES)
    g.add_argument("input", nargs="?")
    g.add_argument("-o", "--output", default="-")
    return p


COMMANDS = {"matcheck": _cmd_matcheck, "polycheck": _cmd_polycheck, "profile": _cmd_profile, "witness": _cmd_witness}
VERDICTS = {EXIT_HOLDS: "holds", EXIT_REFUTED: "refuted", EXIT_INDETERMINATE: "indeterminate"}


def _emit(text: str, out) -> None:
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _emit(f"usage error: {exc}", stderr)
        return EXIT_USAGE
    try:
        if args.command == "gen":
            obj = _generate(args)
            text = json.dumps(to_json(obj), indent=2) if args.format == "json" else write_text(obj)
            if args.output == "-":
                _emit(text, stdout)
            else:
                with open(args.output, "w") as fh:
                    _emit(text, fh)
            return EXIT_HOLDS
        data = _read(args.file)
        start = time.perf_counter()
        code, cert = COMMANDS[args.command](args, _decode(data))
        elapsed = time.perf_counter() - start
    except UsageError as exc:
        _emit(f"usage error: {exc}", stderr)
        return EXIT_USAGE
    except ParseError as exc:
        _emit(f"malformed input: {exc}", stderr)
        return EXIT_DATAERR
    except ValueError as exc:  # rank-deficient matrix, empty polyhedron, non-cone, ...
        _emit(f"invalid input: {exc}", stderr)
        return EXIT_DATAERR
    except OSError as exc:
        _emit(f"cannot read input: {exc}", stderr)
        return EXIT_USAGE
    report = {
        "schema": SCHEMA,
        "command": argv,
        "input_sha256": hashlib.sha256(data).hexdigest(),
        "verdict": VERDICTS[code],
        "certificate": cert,
    }
    if args.timing:
        report["timing"] = {"seconds": round(elapsed, 6)}
    if args.format == "json":
        _emit(json.dumps(report, indent=2), stdout)
    else:
        _emit(f"{args.command}: {report['verdict']}", stdout)
        for key, val in cert.items():
            if not isinstance(val, (dict, list)):
                _emit(f"  {key}: {val}", stdout)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
