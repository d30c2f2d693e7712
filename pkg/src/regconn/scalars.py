"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, zeta_N, ..., zeta_N^(phi(N)-1)
modulo the N-th cyclotomic polynomial, with the conductor N reduced to the
smallest N' | N whose field still contains the element.  Equality is then
a plain coordinate comparison.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from numbers import Rational

from .errors import DivisionByZero, NotASubfield

__all__ = [
    "CycScalar",
    "ZERO",
    "ONE",
    "cyc_arith",
    "root_of_unity",
    "rational_part",
    "is_integer",
    "embed",
    "as_scalar",
    "as_root_of_unity",
    "sqrt",
    "nth_root",
]


def _lcm(a, b):
    return a * b // gcd(a, b)


def _prime_factors(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _divide_monic(num, cyclotomic_polynomial(d))
    return tuple(num)


def _divide_monic(num, den):
    num = list(num)
    dn = len(den) - 1
    quo = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quo[i - dn] = c
            for j, b in enumerate(den):
                num[i - dn + j] -= c * b
    assert not any(num[:dn]), "inexact cyclotomic division"
    return quo


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds the coordinates of zeta_n^k for 0 <= k < n."""
    phi = totient(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x, reduce by the monic Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * poly[i] for i, c in enumerate(cur)]
    return tuple(rows)


def _reduce(n: int, full) -> tuple:
    """Fold a length-n coefficient vector (powers of zeta_n) into the power basis."""
    phi = totient(n)
    out = list(full[:phi])
    table = _power_table(n)
    for k in range(phi, n):
        c = full[k]
        if c:
            row = table[k]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return tuple(out)


@lru_cache(maxsize=None)
def _embedding_columns(d: int, m: int):
    """Coordinates in Q(zeta_m) of the basis zeta_d^i, i < phi(d)."""
    table = _power_table(m)
    step = m // d
    return tuple(table[(i * step) % m] for i in range(totient(d)))


@lru_cache(maxsize=None)
def _descent_solver(d: int, m: int):
    """Pivot rows and inverse block for solving E y = x with E the embedding matrix."""
    cols = _embedding_columns(d, m)
    rows_n, cols_n = totient(m), len(cols)
    mat = [[Fraction(cols[j][i]) for j in range(cols_n)] for i in range(rows_n)]
    pivots = []
    basis = []
    for i in range(rows_n):
        if len(pivots) == cols_n:
            break
        trial = basis + [mat[i]]
        if _rank(trial) == len(trial):
            basis.append(mat[i])
            pivots.append(i)
    inv = _invert_square(basis)
    return tuple(pivots), inv


def _rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _invert_square(rows):
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [a / p for a in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return tuple(tuple(r[n:]) for r in aug)


def _try_descend(coeffs, m: int, d: int):
    pivots, inv = _descent_solver(d, m)
    rhs = [coeffs[i] for i in pivots]
    y = [sum((inv[i][j] * rhs[j] for j in range(len(rhs))), Fraction(0)) for i in range(len(inv))]
    cols = _embedding_columns(d, m)
    for i in range(len(coeffs)):
        if sum((y[j] * cols[j][i] for j in range(len(y))), Fraction(0)) != coeffs[i]:
            return None
    return tuple(y)


def _canonical(n: int, coeffs) -> tuple[int, tuple]:
    if n == 1 or not any(coeffs[1:]):
        return 1, (coeffs[0],)
    changed = True
    while changed and n > 1:
        changed = False
        for p in _prime_factors(n):
            d = n // p
            y = _try_descend(coeffs, n, d)
            if y is not None:
                n, coeffs = d, y
                changed = True
                break
    if n == 1 or not any(coeffs[1:]):
        return 1, (coeffs[0],)
    return n, coeffs


class CycScalar:
    """An element of the cyclotomic field Q(zeta_N)."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, value=0, conductor: int = 1, coeffs=None):
        if coeffs is None:
            if isinstance(value, CycScalar):
                self.conductor, self.coeffs = value.conductor, value.coeffs
            else:
                self.conductor, self.coeffs = 1, (Fraction(value),)
        else:
            coeffs = tuple(Fraction(c) for c in coeffs)
            if len(coeffs) != totient(conductor):
                raise ValueError(f"expected {totient(conductor)} coordinates for conductor {conductor}")
            self.conductor, self.coeffs = _canonical(conductor, coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, n, coeffs):
        obj = object.__new__(cls)
        obj.conductor = n
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def _rat(cls, q):
        return cls._raw(1, (q,))

    @classmethod
    def _make(cls, n, coeffs):
        n, coeffs = _canonical(n, coeffs)
        return cls._raw(n, coeffs)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return self.conductor == 1 or not any(self.coeffs[1:])

    def __bool__(self):
        return not self.is_zero()

    # -- conversions ------------------------------------------------------

    def _vector_at(self, m: int):
        """Coordinates in Q(zeta_m); requires conductor | m."""
        n = self.conductor
        if n == m:
            return self.coeffs
        if m % n:
            raise NotASubfield(f"Q(zeta_{n}) is not contained in Q(zeta_{m})")
        cols = _embedding_columns(n, m)
        out = [Fraction(0)] * totient(m)
        for c, col in zip(self.coeffs, cols):
            if c:
                for i, e in enumerate(col):
                    if e:
                        out[i] += c * e
        return tuple(out)

    def canonical(self) -> "CycScalar":
        return CycScalar._make(self.conductor, self.coeffs)

    def sort_key(self):
        c = self.canonical()
        return (c.conductor, c.coeffs)

    # -- arithmetic -------------------------------------------------------

    def _unify(self, other):
        if self.conductor == other.conductor:
            return self.conductor, self.coeffs, other.coeffs
        m = _lcm(self.conductor, other.conductor)
        return m, self._vector_at(m), other._vector_at(m)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.conductor == 1 and other.conductor == 1:
            return CycScalar._rat(self.coeffs[0] + other.coeffs[0])
        m, a, b = self._unify(other)
        return CycScalar._make(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CycScalar._raw(self.conductor, tuple(-c for c in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.conductor == 1 and other.conductor == 1:
            return CycScalar._rat(self.coeffs[0] - other.coeffs[0])
        m, a, b = self._unify(other)
        return CycScalar._make(m, tuple(x - y for x, y in zip(a, b)))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.conductor == 1 and other.conductor == 1:
            return CycScalar._rat(self.coeffs[0] * other.coeffs[0])
        if other.conductor == 1:
            q = other.coeffs[0]
            return CycScalar._raw(self.conductor, tuple(c * q for c in self.coeffs)) if q else ZERO
        if self.conductor == 1:
            q = self.coeffs[0]
            return CycScalar._raw(other.conductor, tuple(c * q for c in other.coeffs)) if q else ZERO
        m, a, b = self._unify(other)
        full = [Fraction(0)] * m
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        full[(i + j) % m] += x * y
        return CycScalar._make(m, _reduce(m, full))

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in a cyclotomic field")
        if self.conductor == 1:
            return CycScalar._rat(1 / self.coeffs[0])
        n = self.conductor
        phi = totient(n)
        table = _power_table(n)
        # columns: coordinates of self * zeta^j
        cols = []
        for j in range(phi):
            full = [Fraction(0)] * n
            for i, x in enumerate(self.coeffs):
                if x:
                    full[(i + j) % n] += x
            cols.append(_reduce(n, full))
        mat = [[cols[j][i] for j in range(phi)] for i in range(phi)]
        inv = _invert_square(mat)
        y = tuple(inv[i][0] for i in range(phi))
        del table
        return CycScalar._make(n, y)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        if self.conductor == other.conductor:
            return self.coeffs == other.coeffs
        _, a, b = self._unify(other)
        return a == b

    def __hash__(self):
        if self._hash is None:
            c = self.canonical()
            self._hash = hash(c.coeffs[0]) if c.conductor == 1 else hash((c.conductor, c.coeffs))
        return self._hash

    def __repr__(self):
        return f"CycScalar({self})"

    def __str__(self):
        from .textio import format_scalar

        return format_scalar(self)


def _coerce(x):
    if isinstance(x, CycScalar):
        return x
    if isinstance(x, (int, Rational)):
        return CycScalar._rat(Fraction(x))
    return NotImplemented


def as_scalar(x) -> CycScalar:
    y = _coerce(x)
    if y is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a cyclotomic scalar")
    return y


ZERO = CycScalar._rat(Fraction(0))
ONE = CycScalar._rat(Fraction(1))


def cyc_arith(op: str, a, b=None) -> CycScalar:
    a = as_scalar(a)
    if op == "inv":
        return a.inverse()
    b = as_scalar(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


@lru_cache(maxsize=4096)
def root_of_unity(l: int, j: int = 1) -> CycScalar:
    """The primitive l-th root of unity zeta_l raised to the power j."""
    if l < 1:
        raise ValueError("l must be positive")
    j %= l
    if j == 0:
        return ONE
    return CycScalar._make(l, tuple(Fraction(c) for c in _power_table(l)[j]))


def rational_part(a) -> Fraction | None:
    a = as_scalar(a).canonical()
    if a.conductor == 1:
        return a.coeffs[0]
    return None


def is_integer(a) -> bool:
    q = rational_part(a)
    return q is not None and q.denominator == 1


def embed(a, m: int) -> CycScalar:
    """Represent `a` over Q(zeta_m); the result is deliberately not re-canonicalized."""
    a = as_scalar(a)
    return CycScalar._raw(m, a._vector_at(m))


def constant_coordinate(a) -> Fraction:
    """First power-basis coordinate of the canonical representation."""
    return as_scalar(a).canonical().coeffs[0]


def as_root_of_unity(a) -> tuple[int, int] | None:
    """Return (l, j) with a == zeta_l^j and l minimal, or None."""
    a = as_scalar(a).canonical()
    big = _lcm(2, a.conductor)
    for j in range(big):
        if root_of_unity(big, j) == a:
            g = gcd(j, big)
            return big // g, j // g
    return None


def _rational_sqrt(q: Fraction) -> CycScalar:
    if q == 0:
        return ZERO
    num, den = q.numerator, q.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    val = abs(num * den)
    square, free = 1, 1
    for p in _prime_factors(val):
        e = 0
        while val % p == 0:
            val //= p
            e += 1
        square *= p ** (e // 2)
        free *= p ** (e % 2)
    root = CycScalar(Fraction(square, den))
    for p in _prime_factors(free):
        root = root * _sqrt_prime(p)
    if num < 0:
        root = root * root_of_unity(4, 1)
    return root


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> CycScalar:
    if p == 2:
        return root_of_unity(8, 1) + root_of_unity(8, 7)
    # quadratic Gauss sum: g^2 = (-1)^((p-1)/2) p
    g = ZERO
    for a in range(1, p):
        legendre = pow(a, (p - 1) // 2, p)
        g = g + root_of_unity(p, a) if legendre == 1 else g - root_of_unity(p, a)
    if p % 4 == 3:
        g = g * root_of_unity(4, 3)
    return g


def sqrt(a) -> CycScalar | None:
    """A square root of `a` inside some cyclotomic field, or None if none is found.

    Rationals always have one (Gauss sums); other inputs are handled when they
    are a rational multiple of a root of unity.
    """
    a = as_scalar(a).canonical()
    q = rational_part(a)
    if q is not None:
        return _rational_sqrt(q)
    big = _lcm(2, a.conductor)
    for j in range(big):
        ratio = a / root_of_unity(big, j)
        q = rational_part(ratio)
        if q is not None:
            return _rational_sqrt(q) * root_of_unity(2 * big, j)
    return None


def _rational_nth_root(q: Fraction, n: int) -> Fraction | None:
    if q < 0 and n % 2 == 0:
        return None
    sign = -1 if q < 0 else 1
    out = []
    for v in (abs(q.numerator), q.denominator):
        r = round(v ** (1.0 / n))
        found = None
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**n == v:
                found = cand
        if found is None:
            if n == 2:
                s = isqrt(v)
                found = s if s * s == v else None
            if found is None:
                return None
        out.append(found)
    return sign * Fraction(out[0], out[1])


def nth_root(a, n: int) -> CycScalar | None:
    """An n-th root of `a` of the form (rational) * (root of unity), if one exists."""
    a = as_scalar(a).canonical()
    if a.is_zero():
        return ZERO
    if n == 1:
        return a
    if n == 2:
        return sqrt(a)
    big = _lcm(2, a.conductor)
    for j in range(big):
        ratio = a / root_of_unity(big, j)
        q = rational_part(ratio)
        if q is None:
            continue
        base = _rational_nth_root(abs(q), n)
        if base is None:
            return None
        unit = root_of_unity(n * big, j)
        if q < 0:
            unit = unit * root_of_unity(2 * n, 1)
        return CycScalar(base) * unit
    return None
