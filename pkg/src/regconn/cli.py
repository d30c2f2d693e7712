"""Batch command-line front end.

Boolean commands exit 0 for true and 1 for false; any error exits 2.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from math import gcd
from pathlib import Path

from .centralizer import centralizer_data, torsion_elements
from .classify import (
    as_datum,
    dmodule_decompose,
    gl_equivalent,
    related,
    sl_classify_rel_to,
    sl_gauge_equivalent,
)
from .classify import _base_point
from .connection import Connection, classify_shape
from .errors import ParseError, RegconnError
from .linalg import Matrix, is_jordan_matrix, jordan_form
from .reduce import standardize, zero_standardize
from .align import align
from .relatives import relatives_list
from .textio import format_connection, format_matrix, format_scalar, parse_connection, parse_matrix

COMMANDS = ("align", "standardize", "zero-standardize", "classify", "equivalent", "related",
            "relatives", "dmodule", "centralizer")


class Report:
    def __init__(self):
        self.items: list[tuple[str, str]] = []

    def add(self, key, value):
        self.items.append((key, str(value)))

    def render(self, fmt: str) -> str:
        if fmt == "kv":
            return "".join(f"{k}={v}\n" for k, v in self.items)
        width = max((len(k) for k, _ in self.items), default=0)
        return "".join(f"{k.ljust(width)} : {v}\n" for k, v in self.items)


def _read_connection(path: str) -> Connection:
    text = Path(path).read_text()
    try:
        return parse_connection(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _read_matrix(path: str) -> Matrix:
    """A constant matrix, from either a connection file or a bare matrix."""
    text = Path(path).read_text()
    body = text
    if text.lstrip().startswith("group="):
        conn = parse_connection(text)
        if not conn.is_exact or not conn.is_constant():
            raise ParseError(f"{path}: expected a constant connection")
        return conn.constant_matrix()
    try:
        return parse_matrix(body, scalar=True)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _conductor_of(mats) -> int:
    n = 1
    for M in mats:
        for row in M.entries:
            for x in row:
                vals = x.terms.values() if hasattr(x, "terms") else [x]
                for v in vals:
                    c = v.canonical().conductor
                    n = n * c // gcd(n, c)
    return n


def _check_conductor(args, mats, report):
    inferred = _conductor_of(mats)
    if args.level:
        inferred = inferred * args.level // gcd(inferred, args.level)
    if args.conductor is not None:
        if args.conductor % _conductor_of(mats):
            raise RegconnError(f"inputs need conductor {_conductor_of(mats)}, which does not divide {args.conductor}")
        inferred = args.conductor
    report.add("conductor", inferred)


def _chain_text(chain):
    return " ; ".join(format_matrix(g.matrix) for g in chain)


def cmd_align(args, report):
    A = _read_connection(args.files[0])
    _check_conductor(args, [A.coeff], report)
    res = align(A, args.precision)
    report.add("aligned", format_matrix(res.base.coeff))
    report.add("s_part", format_matrix(res.s_part))
    report.add("r_max", res.r_max)
    report.add("witness", format_matrix(res.witness.matrix))
    report.add("precision", "exact" if res.precision is None else res.precision)
    report.add("verified", "true")
    return 0


def cmd_standardize(args, report):
    A = _read_connection(args.files[0])
    _check_conductor(args, [A.coeff], report)
    st = standardize(A, args.lattice, args.precision)
    report.add("m", st.m)
    report.add("X", format_matrix(st.X))
    report.add("cocharacter", " ".join(str(f) for f in st.cochar.exponents))
    report.add("chain", _chain_text(st.chain))
    report.add("precision", "exact" if st.precision is None else st.precision)
    report.add("verified", "true")
    return 0


def cmd_zero_standardize(args, report):
    X = _read_matrix(args.files[0])
    _check_conductor(args, [X], report)
    zs = zero_standardize(X, args.lattice)
    report.add("cover", zs.cover)
    report.add("X_prime", format_matrix(zs.X_prime))
    report.add("cocharacter", " ".join(str(f) for f in zs.cochar.exponents))
    report.add("chain", _chain_text(zs.chain))
    report.add("verified", "true")
    return 0


def cmd_classify(args, report):
    A = _read_connection(args.files[0])
    mats = [A.coeff]
    shape = classify_shape(A)
    report.add("shape", shape.kind)
    if args.base:
        X = as_datum(_read_matrix(args.base), "sl")
        mats.append(X.matrix())
        st = None
    else:
        X, st = _base_point(A, args.precision)
    _check_conductor(args, mats, report)
    res = sl_classify_rel_to(X, A, args.precision, standard=st)
    report.add("base", format_matrix(X.matrix()))
    report.add("level", res.cls.level)
    report.add("class", " ".join(str(j) for j in res.cls.exponents))
    report.add("cocycle", format_matrix(res.cocycle))
    report.add("verified", "true" if res.verified else "false")
    return 0


def _standard_datum(A: Connection, lattice: str, p):
    st = standardize(A, lattice, p)
    return jordan_form(st.X * Fraction(1, st.m), group_tag=lattice)


def cmd_equivalent(args, report):
    A, B = (_read_connection(f) for f in args.files[:2])
    _check_conductor(args, [A.coeff, B.coeff], report)
    if args.lattice == "sl":
        ok = sl_gauge_equivalent(A, B, args.precision)
    else:
        ok = gl_equivalent(_standard_datum(A, "gl", args.precision), _standard_datum(B, "gl", args.precision)) is not None
    report.add("equivalent", "true" if ok else "false")
    return 0 if ok else 1


def cmd_related(args, report):
    A, B = (_read_connection(f) for f in args.files[:2])
    _check_conductor(args, [A.coeff, B.coeff], report)
    ok = related(_standard_datum(A, args.lattice, args.precision), _standard_datum(B, args.lattice, args.precision))
    report.add("related", "true" if ok else "false")
    return 0 if ok else 1


def cmd_relatives(args, report):
    X = _read_matrix(args.files[0])
    if is_jordan_matrix(X) is None:
        raise RegconnError("relatives needs X in Jordan form")
    level = args.level or 1
    _check_conductor(args, [X], report)
    rels = relatives_list(X, level)
    report.add("count", len(rels))
    for k, r in enumerate(rels):
        report.add(f"class[{k}]", " ".join(str(j) for j in r.cls.exponents))
        report.add(f"connection[{k}]", format_matrix(r.connection.coeff))
    report.add("verified", "true")
    return 0


def cmd_dmodule(args, report):
    A = _read_connection(args.files[0])
    _check_conductor(args, [A.coeff], report)
    dec = dmodule_decompose(A, args.precision)
    report.add("summands", " ".join(f"M^({format_scalar(x)},{a})" for x, a in dec.summands))
    report.add("rank", dec.rank)
    return 0


def cmd_centralizer(args, report):
    X = _read_matrix(args.files[0])
    _check_conductor(args, [X], report)
    data = centralizer_data(X)
    report.add("blocks", " ".join(f"({format_scalar(x)},{a})" for x, a in data.jordan.blocks))
    for lam in data.filtration:
        report.add(f"filtration[{format_scalar(lam)}]", " ".join(str(len(E)) for E in data.filtration[lam]))
        report.add(f"quotients[{format_scalar(lam)}]", " ".join(str(q) for q in data.quotient_dims(lam)))
    report.add("torus_dim", data.torus_dim)
    report.add("weyl_groups", " ".join("{" + ",".join(str(b) for b in g) + "}" for g in data.weyl_orbits))
    if args.level:
        report.add("torsion_classes", len(torsion_elements(X, args.level, args.lattice)))
    return 0


HANDLERS = {
    "align": (cmd_align, 1),
    "standardize": (cmd_standardize, 1),
    "zero-standardize": (cmd_zero_standardize, 1),
    "classify": (cmd_classify, 1),
    "equivalent": (cmd_equivalent, 2),
    "related": (cmd_related, 2),
    "relatives": (cmd_relatives, 1),
    "dmodule": (cmd_dmodule, 1),
    "centralizer": (cmd_centralizer, 1),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regconn", description="Exact computations with regular connections A dlog z.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("files", nargs="+", help="connection or matrix files")
    parser.add_argument("--lattice", choices=("gl", "sl"), default=None)
    parser.add_argument("--level", type=int, default=None)
    parser.add_argument("--precision", type=int, default=None)
    parser.add_argument("--conductor", type=int, default=None)
    parser.add_argument("--base", default=None, help="base point file for classify")
    parser.add_argument("--format", choices=("human", "kv"), default="human")
    return parser


def _validate(args, parser):
    handler, nfiles = HANDLERS[args.command]
    if len(args.files) != nfiles:
        parser.error(f"{args.command} takes {nfiles} file(s), got {len(args.files)}")
    for name in ("level", "precision", "conductor"):
        v = getattr(args, name)
        if v is not None and v < 1:
            parser.error(f"--{name} must be positive")
    if args.lattice is None:
        args.lattice = "sl" if args.command in ("classify", "relatives") else "gl"
    return handler


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _validate(args, parser)
    report = Report()
    report.add("command", args.command)
    try:
        code = handler(args, report)
    except (RegconnError, OSError, ValueError) as exc:
        sys.stdout.write(report.render(args.format))
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    sys.stdout.write(report.render(args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
