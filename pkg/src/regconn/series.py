"""Laurent polynomials and truncated Puiseux series over cyclotomic scalars.

A series is a finite map from rational exponents to nonzero scalars together
with an optional precision bound.  ``prec is None`` means the series is an
exact Laurent polynomial in z^(1/m); otherwise every term of exponent
``>= prec`` is unknown.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InsufficientPrecision, RamificationMismatch, ZeroDivisor
from .scalars import ONE, ZERO, CycScalar, as_scalar, root_of_unity

__all__ = [
    "RamifiedSeries",
    "LogForm",
    "series_arith",
    "invert_to_precision",
    "z_ddz",
    "substitute_power",
    "galois_act",
    "monomial",
]


def _lcm(a, b):
    return a * b // gcd(a, b)


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class RamifiedSeries:
    __slots__ = ("terms", "prec")

    def __init__(self, terms=None, prec=None):
        clean = {}
        p = None if prec is None else Fraction(prec)
        if terms:
            for e, c in dict(terms).items():
                e = Fraction(e)
                c = as_scalar(c)
                if c.is_zero() or (p is not None and e >= p):
                    continue
                clean[e] = c
        self.terms = clean
        self.prec = p

    @classmethod
    def _raw(cls, terms, prec):
        obj = object.__new__(cls)
        obj.terms = terms
        obj.prec = prec
        return obj

    @classmethod
    def constant(cls, c) -> "RamifiedSeries":
        return cls({0: c})

    @classmethod
    def coerce(cls, x) -> "RamifiedSeries":
        if isinstance(x, RamifiedSeries):
            return x
        return cls({0: as_scalar(x)})

    # -- structure --------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    @property
    def ramification(self) -> int:
        m = 1
        for e in self.terms:
            m = _lcm(m, e.denominator)
        if self.prec is not None:
            m = _lcm(m, self.prec.denominator)
        return m

    def valuation(self):
        """Least stored exponent; None for a series with no known terms."""
        return min(self.terms) if self.terms else None

    def _val_or_prec(self):
        v = self.valuation()
        return self.prec if v is None else v

    def is_zero(self) -> bool:
        """True for the exact zero and for truncated series with no known terms."""
        return not self.terms

    def is_exact_zero(self) -> bool:
        return not self.terms and self.prec is None

    def coefficient(self, e) -> CycScalar:
        e = Fraction(e)
        if self.prec is not None and e >= self.prec:
            raise InsufficientPrecision(f"coefficient of z^{e} lies beyond precision {self.prec}")
        return self.terms.get(e, ZERO)

    def is_constant(self) -> bool:
        return all(e == 0 for e in self.terms)

    def constant_term(self) -> CycScalar:
        return self.terms.get(Fraction(0), ZERO)

    def degree(self):
        return max(self.terms) if self.terms else None

    def truncate(self, p) -> "RamifiedSeries":
        p = _min_prec(self.prec, Fraction(p))
        return RamifiedSeries._raw({e: c for e, c in self.terms.items() if e < p}, p)

    def exact(self) -> "RamifiedSeries":
        """Drop the precision marker, treating unknown terms as zero."""
        return RamifiedSeries._raw(dict(self.terms), None)

    def items(self):
        return sorted(self.terms.items())

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        p = _min_prec(self.prec, other.prec)
        out = {}
        for src in (self.terms, other.terms):
            for e, c in src.items():
                if p is not None and e >= p:
                    continue
                s = out.get(e)
                out[e] = c if s is None else s + c
        return RamifiedSeries._raw({e: c for e, c in out.items() if not c.is_zero()}, p)

    __radd__ = __add__

    def __neg__(self):
        return RamifiedSeries._raw({e: -c for e, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycScalar)):
            c = as_scalar(other)
            if c.is_zero():
                return RamifiedSeries._raw({}, None)
            return RamifiedSeries._raw({e: v * c for e, v in self.terms.items()}, self.prec)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero() or other.is_exact_zero():
            return RamifiedSeries._raw({}, None)
        p = None
        if self.prec is not None:
            p = self.prec + other._val_or_prec()
        if other.prec is not None:
            p = _min_prec(p, other.prec + self._val_or_prec())
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if p is not None and e >= p:
                    continue
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return RamifiedSeries._raw({e: c for e, c in out.items() if not c.is_zero()}, p)

    __rmul__ = __mul__

    def shift(self, e) -> "RamifiedSeries":
        """Multiply by the monomial z^e."""
        e = Fraction(e)
        return RamifiedSeries._raw(
            {k + e: c for k, c in self.terms.items()}, None if self.prec is None else self.prec + e
        )

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self.terms) == 1 and self.prec is None:
                (e, c), = self.terms.items()
                return RamifiedSeries._raw({e * k: c**k}, None)
            raise ZeroDivisor("negative powers need invert_to_precision for non-monomials")
        result = RamifiedSeries.constant(ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.prec == other.prec and self.terms == other.terms

    def agrees_with(self, other) -> bool:
        """Equality of all coefficients both series know."""
        other = _coerce(other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.prec, frozenset(self.terms.items())))

    def __repr__(self):
        return f"RamifiedSeries({self})"

    def __str__(self):
        from .textio import format_series

        return format_series(self)


def _coerce(x):
    if isinstance(x, RamifiedSeries):
        return x
    if isinstance(x, (int, Fraction, CycScalar)):
        return RamifiedSeries({0: x})
    return NotImplemented


def monomial(c, e=0) -> RamifiedSeries:
    """c * z^e."""
    return RamifiedSeries({Fraction(e): c})


def series_arith(op: str, a, b) -> RamifiedSeries:
    a, b = RamifiedSeries.coerce(a), RamifiedSeries.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def invert_to_precision(a: RamifiedSeries, p) -> RamifiedSeries:
    """Return b with a*b = 1 + O(z^p).

    Exact monomials invert exactly.  Otherwise b carries precision p - val(a),
    which needs a known through exponent p + val(a) (relative precision p).
    """
    a = RamifiedSeries.coerce(a)
    p = Fraction(p)
    if not a.terms:
        raise ZeroDivisor("cannot invert a series with no known terms")
    v = a.valuation()
    lead = a.terms[v]
    if a.prec is None and len(a.terms) == 1:
        return RamifiedSeries._raw({-v: lead.inverse()}, None)
    if a.prec is not None and a.prec - v < p:
        raise InsufficientPrecision(
            f"series known to relative precision {a.prec - v}, inversion to {p} requested"
        )
    # normalize u = a z^-v / lead = 1 + higher terms; invert termwise by recursion
    inv_lead = lead.inverse()
    u = {e - v: c * inv_lead for e, c in a.terms.items() if e - v < p}
    exps = sorted(set(u))
    out = {}
    # exponents reachable in the inverse are nonnegative sums of exponents of u
    todo = [Fraction(0)]
    reach = {Fraction(0)}
    i = 0
    while i < len(todo):
        x = todo[i]
        i += 1
        for e in exps:
            if e > 0 and x + e < p and x + e not in reach:
                reach.add(x + e)
                todo.append(x + e)
    for x in sorted(reach):
        if x == 0:
            out[x] = ONE
            continue
        acc = ZERO
        for e in exps:
            if 0 < e <= x:
                y = x - e
                if y in out:
                    acc = acc - u[e] * out[y]
        if not acc.is_zero():
            out[x] = acc
    terms = {e - v: c * inv_lead for e, c in out.items()}
    return RamifiedSeries._raw(terms, p - v)


def z_ddz(a: RamifiedSeries) -> RamifiedSeries:
    a = RamifiedSeries.coerce(a)
    return RamifiedSeries._raw({e: c * e for e, c in a.terms.items() if e != 0}, a.prec)


def substitute_power(m, a: RamifiedSeries) -> RamifiedSeries:
    """Substitute z -> z^m.  A fractional m (such as 1/c) rescales exponents the other way."""
    m = Fraction(m)
    if m <= 0:
        raise ValueError("m must be positive")
    a = RamifiedSeries.coerce(a)
    return RamifiedSeries._raw(
        {e * m: c for e, c in a.terms.items()}, None if a.prec is None else a.prec * m
    )


def galois_act(l: int, t: int, a: RamifiedSeries) -> RamifiedSeries:
    """Apply gamma^t, where gamma(z^(1/l)) = zeta_l z^(1/l)."""
    a = RamifiedSeries.coerce(a)
    if l % a.ramification:
        raise RamificationMismatch(f"series of ramification {a.ramification} is not defined over level {l}")
    out = {}
    for e, c in a.terms.items():
        j = e * l
        out[e] = c * root_of_unity(l, int(j) * t)
    return RamifiedSeries._raw(out, a.prec)


@dataclass(frozen=True)
class LogForm:
    """The differential ``coefficient * dlog z``."""

    coefficient: RamifiedSeries

    def pullback(self, m) -> "LogForm":
        # iota_m(f dlog z) = f(z^m) d log(z^m) = m f(z^m) dlog z
        return LogForm(substitute_power(m, self.coefficient) * as_scalar(Fraction(m)))

    def dz_coefficient(self) -> RamifiedSeries:
        """The coefficient with respect to dz."""
        return self.coefficient.shift(-1)

    @staticmethod
    def derivative(f: RamifiedSeries) -> "LogForm":
        """df written in dlog z coordinates."""
        return LogForm(z_ddz(f))
