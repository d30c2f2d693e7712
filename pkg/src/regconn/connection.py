"""Connections A dlog z, gauge maps and their action.

Coefficients are always taken with respect to dlog z.  A connection over the
cover k((z^(1/l))) simply has entries with fractional exponents; dlog z stays
the reference form there as well.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DeterminantConstraint, DimensionMismatch, NotInvariant, VerificationError
from .linalg import Matrix, is_zero_class
from .scalars import as_scalar
from .series import RamifiedSeries

__all__ = [
    "Connection",
    "GaugeMap",
    "Shape",
    "gauge_apply",
    "pullback",
    "galois_act_conn",
    "descend",
    "classify_shape",
    "gauge_relates",
    "to_ramified",
]

GROUPS = ("gl", "sl")


def _check_tag(tag):
    if tag not in GROUPS:
        raise ValueError(f"group tag must be 'gl' or 'sl', not {tag!r}")


class Connection:
    """The form coeff * dlog z with coeff an n x n matrix of series."""

    __slots__ = ("coeff", "group_tag")

    def __init__(self, coeff, group_tag: str = "gl"):
        _check_tag(group_tag)
        if not isinstance(coeff, Matrix):
            coeff = Matrix(coeff, series=True)
        if not coeff.is_square:
            raise DimensionMismatch("connection matrix must be square")
        self.coeff = coeff.as_series()
        self.group_tag = group_tag
        if group_tag == "sl" and not self.coeff.trace().is_zero():
            raise DeterminantConstraint("sl connection must have trace zero")

    @classmethod
    def constant(cls, X: Matrix, group_tag: str = "gl") -> "Connection":
        return cls(X.as_series(), group_tag)

    @property
    def n(self) -> int:
        return self.coeff.rows

    @property
    def ramification(self) -> int:
        return self.coeff.ramification()

    @property
    def precision(self):
        return self.coeff.precision()

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def is_constant(self) -> bool:
        return self.coeff.is_constant()

    def constant_matrix(self) -> Matrix:
        return self.coeff.coefficient(0)

    def coefficient(self, e) -> Matrix:
        return self.coeff.coefficient(e)

    def exponents(self):
        return self.coeff.exponents()

    def with_tag(self, tag: str) -> "Connection":
        return Connection(self.coeff, tag)

    def __eq__(self, other):
        return isinstance(other, Connection) and self.coeff == other.coeff

    def __hash__(self):
        return hash(self.coeff)

    def __repr__(self):
        return f"Connection({self.group_tag}, {self.coeff})"


class GaugeMap:
    """An invertible series matrix with its inverse stored alongside."""

    __slots__ = ("matrix", "inverse", "group_tag")

    def __init__(self, matrix: Matrix, inverse: Matrix | None = None, group_tag: str = "gl", precision=None):
        _check_tag(group_tag)
        matrix = matrix.as_series()
        if inverse is None:
            inverse = matrix.inverse_to_precision(precision)
        self.matrix = matrix
        self.inverse = inverse.as_series()
        self.group_tag = group_tag
        n = matrix.rows
        prod = matrix @ self.inverse
        ident = Matrix.identity(n, series=True)
        if not all(a.agrees_with(b) for r, s in zip(prod.entries, ident.entries) for a, b in zip(r, s)):
            raise VerificationError("stored inverse does not invert the gauge matrix")
        if group_tag == "sl":
            d = matrix.det()
            if not d.agrees_with(RamifiedSeries.constant(1)):
                raise DeterminantConstraint(f"sl gauge map has determinant {d}")

    @classmethod
    def identity(cls, n: int, group_tag: str = "gl") -> "GaugeMap":
        e = Matrix.identity(n, series=True)
        return cls(e, e, group_tag)

    @classmethod
    def constant(cls, x: Matrix, group_tag: str = "gl") -> "GaugeMap":
        x = x.as_scalars()
        return cls(x.as_series(), x.inverse().as_series(), group_tag)

    @classmethod
    def diagonal_monomials(cls, exponents, coeffs=None, group_tag: str = "gl") -> "GaugeMap":
        """diag(c_i z^(e_i)), inverted exactly."""
        exponents = [Fraction(e) for e in exponents]
        coeffs = [as_scalar(c) for c in (coeffs or [1] * len(exponents))]
        m = Matrix.diag([RamifiedSeries({e: c}) for e, c in zip(exponents, coeffs)], series=True)
        inv = Matrix.diag([RamifiedSeries({-e: c.inverse()}) for e, c in zip(exponents, coeffs)], series=True)
        return cls(m, inv, group_tag)

    @property
    def n(self) -> int:
        return self.matrix.rows

    @property
    def is_exact(self) -> bool:
        return self.matrix.precision() is None and self.inverse.precision() is None

    def __matmul__(self, other: "GaugeMap") -> "GaugeMap":
        tag = "sl" if self.group_tag == other.group_tag == "sl" else "gl"
        return GaugeMap(self.matrix @ other.matrix, other.inverse @ self.inverse, tag)

    def inverted(self) -> "GaugeMap":
        return GaugeMap(self.inverse, self.matrix, self.group_tag)

    def pullback(self, m) -> "GaugeMap":
        """Substitute z -> z^m in both the matrix and its inverse."""
        return GaugeMap(self.matrix.substitute_power(m), self.inverse.substitute_power(m), self.group_tag)

    def galois_act(self, l: int, t: int = 1) -> "GaugeMap":
        return GaugeMap(self.matrix.galois_act(l, t), self.inverse.galois_act(l, t), self.group_tag)

    def with_tag(self, tag: str) -> "GaugeMap":
        return GaugeMap(self.matrix, self.inverse, tag)

    def __eq__(self, other):
        return isinstance(other, GaugeMap) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"GaugeMap({self.group_tag}, {self.matrix})"


def gauge_apply(g: GaugeMap, A: Connection) -> Connection:
    """g[A dlog z] = (g A g^-1 + z d/dz(g) g^-1) dlog z."""
    if g.n != A.n:
        raise DimensionMismatch(f"gauge map of size {g.n} on connection of size {A.n}")
    coeff = g.matrix @ A.coeff @ g.inverse + g.matrix.z_ddz() @ g.inverse
    if A.group_tag == "sl" and g.group_tag == "gl":
        # allowed when det g is constant; the trace check in Connection enforces it
        try:
            return Connection(coeff, "sl")
        except DeterminantConstraint as exc:
            raise DeterminantConstraint("gl gauge map does not preserve trace zero") from exc
    return Connection(coeff, A.group_tag)


def gauge_relates(g: GaugeMap, A: Connection, B: Connection) -> bool:
    """Check g[A] = B through the inverse-free identity g A + z dg/dz = B g."""
    lhs = g.matrix @ A.coeff + g.matrix.z_ddz()
    rhs = B.coeff @ g.matrix
    return all(a.agrees_with(b) for r, s in zip(lhs.entries, rhs.entries) for a, b in zip(r, s))


def pullback(m, A: Connection) -> Connection:
    """iota_m(A(z) dlog z) = m A(z^m) dlog z."""
    m = Fraction(m)
    return Connection(A.coeff.substitute_power(m) * as_scalar(m), A.group_tag)


def to_ramified(c: int, A: Connection) -> Connection:
    """Rewrite a connection in the cover variable w = z^(1/c) as one over k((z^(1/c)))."""
    return pullback(Fraction(1, c), A)


def galois_act_conn(l: int, t: int, A: Connection) -> Connection:
    return Connection(A.coeff.galois_act(l, t), A.group_tag)


def descend(m: int, C: Connection) -> Connection:
    """Return D with pullback(m, D) = C, when C is invariant under the cover group."""
    r = C.ramification
    for e in C.exponents():
        q = e / m
        if r % q.denominator:
            raise NotInvariant(f"exponent {e} is not divisible by {m}", )
    D = pullback(Fraction(1, m), C)
    if pullback(m, D) != C:
        raise VerificationError("descent failed to round-trip")
    return D


@dataclass(frozen=True)
class Shape:
    kind: str
    X: Matrix | None = None

    @property
    def first_kind(self) -> bool:
        return self.kind in ("first_kind", "standard", "zero_standard")

    @property
    def standard(self) -> bool:
        return self.kind in ("standard", "zero_standard")

    @property
    def zero_standard(self) -> bool:
        return self.kind == "zero_standard"


def classify_shape(A: Connection) -> Shape:
    v = A.coeff.valuation()
    if v is not None and v < 0:
        return Shape("other")
    if not A.is_exact or not A.is_constant():
        return Shape("first_kind")
    X = A.constant_matrix()
    if is_zero_class(X):
        return Shape("zero_standard", X)
    return Shape("standard", X)

