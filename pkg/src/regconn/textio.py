"""Text formats for scalars, series, matrices and connection files.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)?
    atom   := NUMBER | 'zeta(' INT ')' | 'z' | 'O(' 'z' ('^' exponent)? ')' | '(' expr ')'
    exponent := INT | '-' INT | '(' expr ')'

A connection file is a header line ``group=gl n=2 ram=1`` followed by a
matrix ``[[a, b], [c, d]]``.  Everything printed here parses back to an equal
value.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .scalars import CycScalar, as_scalar, root_of_unity
from .series import RamifiedSeries, invert_to_precision

__all__ = [
    "parse_scalar",
    "parse_series",
    "parse_matrix",
    "parse_connection",
    "format_scalar",
    "format_series",
    "format_matrix",
    "format_connection",
]

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_]+)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        elif m.group(3):
            tokens.append(("sym", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, position=tok[2], source=self.text)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            self.error(f"expected {want!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def at(self, value):
        return self.peek()[1] == value and self.peek()[0] in ("sym", "name")

    # -- expressions ------------------------------------------------------

    def expr(self) -> RamifiedSeries:
        val = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> RamifiedSeries:
        val = self.unary()
        while self.at("*") or self.at("/"):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                val = val * rhs
            else:
                val = val * self._reciprocal(rhs, tok)
        return val

    def _reciprocal(self, s, tok):
        if s.is_exact and len(s.terms) == 1:
            return invert_to_precision(s, 0)
        self.error("can only divide by a nonzero monomial", tok)

    def unary(self) -> RamifiedSeries:
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RamifiedSeries:
        tok = self.peek()
        base, is_z = self.atom()
        if self.at("^"):
            self.take()
            e = self.exponent()
            if is_z:
                return RamifiedSeries({e: 1})
            if e.denominator != 1:
                self.error("fractional powers are only allowed on z", tok)
            e = int(e)
            if e < 0:
                return self._reciprocal(base, tok) ** (-e)
            return base**e
        return base

    def exponent(self) -> Fraction:
        if self.at("("):
            self.take()
            val = self.expr()
            self.take("sym", ")")
            if not val.is_exact or not val.is_constant():
                self.error("exponent must be a rational constant")
            q = val.constant_term()
            if not q.is_rational():
                self.error("exponent must be rational")
            return q.coeffs[0]
        sign = 1
        if self.at("-"):
            self.take()
            sign = -1
        tok = self.take("num")
        if "." in tok[1]:
            self.error("exponent must be an integer or parenthesized", tok)
        return Fraction(sign * int(tok[1]))

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return RamifiedSeries({0: Fraction(tok[1])}), False
        if tok[0] == "name":
            name = tok[1]
            if name == "z":
                self.take()
                return RamifiedSeries({1: 1}), True
            if name == "zeta":
                self.take()
                self.take("sym", "(")
                n = self.take("num")
                if "." in n[1] or int(n[1]) < 1:
                    self.error("zeta needs a positive integer", n)
                self.take("sym", ")")
                return RamifiedSeries({0: root_of_unity(int(n[1]), 1)}), False
            if name == "O":
                self.take()
                self.take("sym", "(")
                zt = self.take("name")
                if zt[1] != "z":
                    self.error("expected z inside O(...)", zt)
                e = Fraction(1)
                if self.at("^"):
                    self.take()
                    e = self.exponent()
                self.take("sym", ")")
                return RamifiedSeries({}, prec=e), False
            self.error(f"unknown name {name!r}")
        if self.at("("):
            self.take()
            val = self.expr()
            self.take("sym", ")")
            return val, False
        self.error(f"unexpected {tok[1] or 'end of input'!r}")

    def matrix_rows(self):
        self.take("sym", "[")
        rows = []
        while True:
            self.take("sym", "[")
            row = [self.expr()]
            while self.at(","):
                self.take()
                row.append(self.expr())
            self.take("sym", "]")
            rows.append(row)
            if self.at(","):
                self.take()
                continue
            break
        self.take("sym", "]")
        if len({len(r) for r in rows}) != 1:
            self.error("matrix rows have different lengths")
        return rows

    def finish(self):
        if self.peek()[0] != "end":
            self.error(f"trailing input {self.peek()[1]!r}")


def parse_series(text: str) -> RamifiedSeries:
    p = _Parser(text)
    val = p.expr()
    p.finish()
    return val


def parse_scalar(text: str) -> CycScalar:
    s = parse_series(text)
    if not s.is_exact or not s.is_constant():
        raise ParseError("expected a constant scalar", source=text)
    return s.constant_term()


def parse_matrix(text: str, scalar: bool = False):
    from .linalg import Matrix

    p = _Parser(text)
    rows = p.matrix_rows()
    p.finish()
    if scalar:
        out = []
        for row in rows:
            for s in row:
                if not s.is_exact or not s.is_constant():
                    raise ParseError("expected constant matrix entries", source=text)
            out.append([s.constant_term() for s in row])
        return Matrix(out)
    return Matrix(rows)


_HEADER = re.compile(r"^\s*group\s*=\s*(\w+)\s+n\s*=\s*(\d+)(?:\s+ram\s*=\s*(\d+))?\s*$")


def parse_connection(text: str):
    from .connection import Connection

    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty connection file", source=text)
    m = _HEADER.match(lines[0])
    if m is None:
        raise ParseError("bad header, expected 'group=<gl|sl> n=<dim> ram=<m>'", position=0, source=lines[0])
    group, n, ram = m.group(1), int(m.group(2)), int(m.group(3) or 1)
    if group not in ("gl", "sl"):
        raise ParseError(f"unknown group {group!r}", source=lines[0])
    body = "\n".join(lines[1:])
    mat = parse_matrix(body)
    if mat.rows != n or mat.cols != n:
        raise ParseError(f"header says n={n} but matrix is {mat.rows}x{mat.cols}", source=body)
    for row in mat.entries:
        for s in row:
            if ram % s.ramification:
                raise ParseError(f"entry {format_series(s)} needs ramification {s.ramification}, header says {ram}", source=body)
    return Connection(mat, group)


# -- printing ---------------------------------------------------------------


def _fmt_rat(q: Fraction) -> str:
    return str(q)


def format_scalar(a) -> str:
    a = as_scalar(a).canonical()
    if a.conductor == 1:
        return _fmt_rat(a.coeffs[0])
    parts = []
    for j, c in enumerate(a.coeffs):
        if c == 0:
            continue
        if j == 0:
            mono = None
        elif j == 1:
            mono = f"zeta({a.conductor})"
        else:
            mono = f"zeta({a.conductor})^{j}"
        if mono is None:
            txt = _fmt_rat(c)
        elif c == 1:
            txt = mono
        elif c == -1:
            txt = "-" + mono
        else:
            txt = f"{_fmt_rat(c)}*{mono}"
        parts.append(txt)
    return _join(parts)


def _join(parts):
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    return f"({e})"


def format_series(s: RamifiedSeries) -> str:
    parts = []
    for e, c in s.items():
        cs = format_scalar(c)
        if e == 0:
            alone = len(s.terms) == 1 and s.prec is None
            parts.append(cs if alone or " " not in cs else f"({cs})")
            continue
        mono = "z" if e == 1 else f"z^{_fmt_exp(e)}"
        if cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append("-" + mono)
        elif " " in cs:
            parts.append(f"({cs})*{mono}")
        else:
            parts.append(f"{cs}*{mono}")
    if s.prec is not None:
        parts.append("O(z)" if s.prec == 1 else f"O(z^{_fmt_exp(s.prec)})")
    return _join(parts) if parts else "0"


def _fmt_entry(x) -> str:
    if isinstance(x, RamifiedSeries):
        return format_series(x)
    return format_scalar(x)


def format_matrix(mat) -> str:
    return "[" + ", ".join("[" + ", ".join(_fmt_entry(x) for x in row) + "]" for row in mat.entries) + "]"


def format_connection(conn) -> str:
    return f"group={conn.group_tag} n={conn.n} ram={conn.ramification}\n{format_matrix(conn.coeff)}\n"
