"""Dense exact matrices, Jordan forms and ad-eigenvalues.

Matrices hold either cyclotomic scalars or ramified series.  Elimination-based
routines (rank, kernel, inverse, Jordan form) require scalar entries; series
matrices get a cofactor determinant and an adjugate-based inverse.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from .errors import DimensionMismatch, EigenvaluesNotFound, VerificationError, ZeroDivisor
from .scalars import ONE, ZERO, CycScalar, as_scalar, nth_root, rational_part, sqrt
from .series import RamifiedSeries, galois_act, invert_to_precision, substitute_power, z_ddz

__all__ = [
    "Matrix",
    "JordanDatum",
    "jordan_block",
    "block_diag",
    "charpoly",
    "find_eigenvalues",
    "jordan_form",
    "jordan_decomposition",
    "ad_eigenvalues",
    "is_zero_class",
    "is_jordan_matrix",
]


def _entry(x, series: bool):
    if series:
        return RamifiedSeries.coerce(x)
    if isinstance(x, RamifiedSeries):
        if not x.is_exact or not x.is_constant():
            raise TypeError("non-constant series in a scalar matrix")
        return x.constant_term()
    return as_scalar(x)


class Matrix:
    """Immutable rectangular matrix; ``@`` multiplies matrices, ``*`` scales."""

    __slots__ = ("entries", "rows", "cols", "is_series")

    def __init__(self, entries, series: bool | None = None):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise DimensionMismatch("matrices must be nonempty")
        if len({len(r) for r in rows}) != 1:
            raise DimensionMismatch("ragged matrix rows")
        if series is None:
            series = any(isinstance(x, RamifiedSeries) for r in rows for x in r)
        self.entries = tuple(tuple(_entry(x, series) for x in r) for r in rows)
        self.rows = len(rows)
        self.cols = len(rows[0])
        self.is_series = series

    @classmethod
    def _raw(cls, entries, series):
        obj = object.__new__(cls)
        obj.entries = entries
        obj.rows = len(entries)
        obj.cols = len(entries[0])
        obj.is_series = series
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int, series: bool = False) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], series=series)

    @classmethod
    def zero(cls, rows: int, cols: int | None = None, series: bool = False) -> "Matrix":
        return cls([[0] * (cols or rows) for _ in range(rows)], series=series)

    @classmethod
    def diag(cls, values, series: bool | None = None) -> "Matrix":
        values = list(values)
        n = len(values)
        if series is None:
            series = any(isinstance(v, RamifiedSeries) for v in values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], series=series)

    @classmethod
    def elementary(cls, n: int, i: int, j: int, value=1) -> "Matrix":
        return cls([[value if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])

    @classmethod
    def from_columns(cls, cols) -> "Matrix":
        cols = [list(c) for c in cols]
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))])

    # -- access -----------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self):
        return self.rows == self.cols

    def column(self, j):
        return [r[j] for r in self.entries]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def diagonal(self):
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def transpose(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self.entries)), self.is_series)

    def map(self, fn, series: bool | None = None) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self.entries], series=self.is_series if series is None else series)

    def as_series(self) -> "Matrix":
        if self.is_series:
            return self
        return Matrix._raw(tuple(tuple(RamifiedSeries.constant(x) for x in r) for r in self.entries), True)

    def as_scalars(self) -> "Matrix":
        if not self.is_series:
            return self
        return Matrix(self.entries, series=False)

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix._raw(tuple(tuple(self.entries[i][j] for j in cols) for i in rows), self.is_series)

    # -- arithmetic -------------------------------------------------------

    def _promote(self, other):
        if self.is_series == other.is_series:
            return self, other
        return self.as_series(), other.as_series()

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        a, b = self._promote(other)
        return Matrix._raw(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a.entries, b.entries)), a.is_series)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Matrix._raw(tuple(tuple(-x for x in r) for r in self.entries), self.is_series)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        if isinstance(c, RamifiedSeries) and not self.is_series:
            return self.as_series() * c
        return Matrix._raw(tuple(tuple(x * c for x in r) for r in self.entries), self.is_series)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self._promote(other)
        zero = RamifiedSeries() if a.is_series else ZERO
        bt = list(zip(*b.entries))
        out = []
        for r in a.entries:
            row = []
            for c in bt:
                acc = zero
                for x, y in zip(r, c):
                    if a.is_series:
                        if x.is_exact_zero() or y.is_exact_zero():
                            continue
                    elif x.is_zero() or y.is_zero():
                        continue
                    acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return Matrix._raw(tuple(out), a.is_series)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.rows, self.is_series)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix) or self.shape != other.shape:
            return False
        if self.is_series != other.is_series:
            a, b = self._promote(other)
            return a.entries == b.entries
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def trace(self):
        return reduce(lambda a, b: a + b, self.diagonal())

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.entries for x in r)

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(self.rows) for j in range(self.cols) if i != j)

    def commutator(self, other) -> "Matrix":
        return self @ other - other @ self

    # -- series-level maps ------------------------------------------------

    def z_ddz(self) -> "Matrix":
        return self.as_series().map(z_ddz)

    def substitute_power(self, m) -> "Matrix":
        return self.as_series().map(lambda s: substitute_power(m, s))

    def galois_act(self, l: int, t: int = 1) -> "Matrix":
        return self.as_series().map(lambda s: galois_act(l, t, s))

    def ramification(self) -> int:
        if not self.is_series:
            return 1
        m = 1
        for r in self.entries:
            for s in r:
                k = s.ramification
                m = m * k // gcd(m, k)
        return m

    def precision(self):
        """Least precision bound among the entries; None when all are exact."""
        if not self.is_series:
            return None
        ps = [s.prec for r in self.entries for s in r if s.prec is not None]
        return min(ps) if ps else None

    def is_constant(self) -> bool:
        return not self.is_series or all(s.is_constant() for r in self.entries for s in r)

    def coefficient(self, e) -> "Matrix":
        """The scalar matrix of z^e coefficients."""
        if not self.is_series:
            return self if e == 0 else Matrix.zero(self.rows, self.cols)
        return Matrix._raw(tuple(tuple(s.coefficient(e) for s in r) for r in self.entries), False)

    def exponents(self):
        if not self.is_series:
            return [Fraction(0)] if not self.is_zero() else []
        return sorted({e for r in self.entries for s in r for e in s.terms})

    def truncate(self, p) -> "Matrix":
        return self.as_series().map(lambda s: s.truncate(p))

    def exact(self) -> "Matrix":
        return self.map(lambda s: s.exact()) if self.is_series else self

    def valuation(self):
        vals = [s.valuation() for r in self.as_series().entries for s in r if s.terms]
        return min(vals) if vals else None

    # -- scalar linear algebra -------------------------------------------

    def _require_scalar(self):
        if self.is_series:
            raise TypeError("operation needs a matrix over scalars")

    def rref(self):
        """Reduced row echelon form and pivot columns."""
        self._require_scalar()
        rows = [list(r) for r in self.entries]
        pivots = []
        rank = 0
        for c in range(self.cols):
            piv = next((r for r in range(rank, self.rows) if not rows[r][c].is_zero()), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            inv = rows[rank][c].inverse()
            rows[rank] = [x * inv for x in rows[rank]]
            for r in range(self.rows):
                if r != rank and not rows[r][c].is_zero():
                    f = rows[r][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
            pivots.append(c)
            rank += 1
            if rank == self.rows:
                break
        return Matrix._raw(tuple(tuple(r) for r in rows), False), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> list[list[CycScalar]]:
        """Basis of the right null space, as column vectors."""
        red, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [ZERO] * self.cols
            v[f] = ONE
            for i, p in enumerate(pivots):
                v[p] = -red.entries[i][f]
            basis.append(v)
        return basis

    def det(self):
        if not self.is_square:
            raise DimensionMismatch("determinant of a non-square matrix")
        if self.is_series:
            return _series_det(self)
        rows = [list(r) for r in self.entries]
        n = self.rows
        d = ONE
        for c in range(n):
            piv = next((r for r in range(c, n) if not rows[r][c].is_zero()), None)
            if piv is None:
                return ZERO
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                d = -d
            d = d * rows[c][c]
            inv = rows[c][c].inverse()
            for r in range(c + 1, n):
                if not rows[r][c].is_zero():
                    f = rows[r][c] * inv
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise DimensionMismatch("inverse of a non-square matrix")
        if self.is_series:
            return self.inverse_to_precision(None)
        n = self.rows
        aug = Matrix._raw(tuple(r + tuple(ONE if i == j else ZERO for j in range(n)) for i, r in enumerate(self.entries)), False)
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisor("matrix is singular")
        return Matrix._raw(tuple(r[n:] for r in red.entries), False)

    def solve(self, rhs: Sequence) -> list[CycScalar] | None:
        """One solution x of self x = rhs, or None."""
        n = self.cols
        aug = Matrix._raw(tuple(r + (as_scalar(b),) for r, b in zip(self.entries, rhs)), False)
        red, pivots = aug.rref()
        if n in pivots:
            return None
        x = [ZERO] * n
        for i, p in enumerate(pivots):
            x[p] = red.entries[i][n]
        return x

    # -- series inverse ---------------------------------------------------

    def adjugate(self) -> "Matrix":
        n = self.rows
        if n == 1:
            return Matrix.identity(1, self.is_series)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = self.submatrix([r for r in range(n) if r != j], [c for c in range(n) if c != i])
                d = minor.det()
                row.append(d if (i + j) % 2 == 0 else -d)
            out.append(row)
        return Matrix(out, series=self.is_series)

    def inverse_to_precision(self, p=None) -> "Matrix":
        """Inverse of a series matrix via the adjugate.

        ``p`` is the target precision of g * g^-1 - 1; None asks for an exact
        inverse and requires the determinant to be a monomial.
        """
        if not self.is_series:
            return self.inverse()
        d = self.det()
        if p is None:
            if not (d.is_exact and len(d.terms) == 1):
                raise ZeroDivisor("exact inverse needs a monomial determinant")
            dinv = invert_to_precision(d, 0)
        else:
            dinv = invert_to_precision(d, p)
        return self.adjugate() * dinv

    def __repr__(self):
        return f"Matrix({self})"

    def __str__(self):
        from .textio import format_matrix

        return format_matrix(self)


def _series_det(m: Matrix):
    n = m.rows
    memo = {}

    def rec(row, cols):
        if row == n:
            return RamifiedSeries.constant(ONE)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = RamifiedSeries()
        sign = 1
        for j in range(n):
            if cols & (1 << j):
                continue
            x = m.entries[row][j]
            if not x.is_exact_zero():
                term = x * rec(row + 1, cols | (1 << j))
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[key] = acc
        return acc

    # sign above alternates over free columns, which is the Laplace sign
    return rec(0, 0)


def block_diag(blocks) -> Matrix:
    blocks = list(blocks)
    series = any(b.is_series for b in blocks)
    n = sum(b.rows for b in blocks)
    zero = RamifiedSeries() if series else ZERO
    out = [[zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        b = b.as_series() if series else b
        for i in range(b.rows):
            for j in range(b.cols):
                out[off + i][off + j] = b.entries[i][j]
        off += b.rows
    return Matrix._raw(tuple(tuple(r) for r in out), series)


def jordan_block(x, a: int) -> Matrix:
    """The a x a Jordan block J(x, a) with ones on the superdiagonal."""
    x = as_scalar(x)
    return Matrix([[x if i == j else (ONE if j == i + 1 else ZERO) for j in range(a)] for i in range(a)])


# -- polynomials over scalars (coefficient lists, lowest degree first) ------


def charpoly(X: Matrix) -> list[CycScalar]:
    """Monic characteristic polynomial det(t - X) by Faddeev-LeVerrier."""
    X._require_scalar()
    n = X.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    M = Matrix.zero(n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        M = X @ M + ident * coeffs[n - k + 1]
        coeffs[n - k] = -(X @ M).trace() / k
    return coeffs


def _peval(p, x):
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pdiv_linear(p, r):
    """Quotient of p by (t - r); assumes r is a root."""
    n = len(p) - 1
    q = [ZERO] * n
    acc = ZERO
    for i in range(n, 0, -1):
        acc = acc * r + p[i]
        q[i - 1] = acc
    return q


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_root_candidates(p) -> list[Fraction]:
    """Candidate rational roots of a polynomial with cyclotomic coefficients."""
    from .scalars import embed

    cond = 1
    for c in p:
        cond = cond * c.conductor // gcd(cond, c.conductor)
    vecs = [embed(c, cond).coeffs for c in p]
    # a rational root kills every coordinate polynomial; use the first nonzero one
    for k in range(len(vecs[0])):
        poly = [v[k] for v in vecs]
        if any(poly):
            break
    else:
        return []
    while poly and poly[-1] == 0:
        poly.pop()
    lo = 0
    while poly[lo] == 0:
        lo += 1
    poly = poly[lo:]
    out = [Fraction(0)] if lo else []
    if len(poly) <= 1:
        return out
    den = 1
    for c in poly:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in poly]
    if abs(ints[0]) > 10**12 or abs(ints[-1]) > 10**12:
        return out
    for a in _divisors(ints[0]):
        for b in _divisors(ints[-1]):
            for s in (1, -1):
                q = Fraction(s * a, b)
                if q not in out:
                    out.append(q)
    return out


def find_eigenvalues(X: Matrix, supplied=None) -> list[CycScalar]:
    """Eigenvalues with multiplicity, found by the root search or verified if supplied."""
    p = charpoly(X)
    n = X.rows
    if supplied is not None:
        supplied = [as_scalar(x) for x in supplied]
        rest = p
        for x in supplied:
            if len(rest) < 2 or not _peval(rest, x).is_zero():
                raise VerificationError(f"supplied eigenvalue {x} does not fit the characteristic polynomial")
            rest = _pdiv_linear(rest, x)
        if len(supplied) != n:
            raise VerificationError("supplied eigenvalue list has the wrong length")
        return supplied
    found = []
    rest = p

    def strip(r):
        nonlocal rest
        while len(rest) > 1 and _peval(rest, r).is_zero():
            found.append(r)
            rest = _pdiv_linear(rest, r)

    for d in X.diagonal():
        strip(d)
    for mult, factor in _squarefree_factors(rest):
        for root in _split_squarefree(factor):
            found += [root] * mult
    return found


def _split_squarefree(rest) -> list[CycScalar]:
    roots = []

    def strip(r):
        nonlocal rest
        if len(rest) > 1 and _peval(rest, r).is_zero():
            roots.append(r)
            rest = _pdiv_linear(rest, r)

    if len(rest) > 2:
        for q in _rational_root_candidates(rest):
            strip(as_scalar(q))
            if len(rest) <= 2:
                break
    if len(rest) == 2:
        roots.append(-rest[0] / rest[1])
    elif len(rest) == 3:
        c, b, a = rest
        disc = sqrt(b * b - a * c * 4)
        if disc is None:
            raise EigenvaluesNotFound(f"cannot take the square root of the discriminant {b * b - a * c * 4}")
        roots.append((-b + disc) / (a * 2))
        roots.append((-b - disc) / (a * 2))
    elif len(rest) > 3:
        raise EigenvaluesNotFound(f"characteristic polynomial has an unsplit factor of degree {len(rest) - 1}")
    return roots


# polynomials below are coefficient lists, constant term first


def _ptrim(p):
    p = list(p)
    while len(p) > 1 and p[-1].is_zero():
        p.pop()
    return p


def _pderiv(p):
    return _ptrim([p[k] * k for k in range(1, len(p))] or [ZERO])


def _psub(p, q):
    n = max(len(p), len(q))
    p = list(p) + [ZERO] * (n - len(p))
    q = list(q) + [ZERO] * (n - len(q))
    return _ptrim([a - b for a, b in zip(p, q)])


def _pdivmod(p, q):
    p, q = _ptrim(p), _ptrim(q)
    if len(p) < len(q):
        return [ZERO], p
    out = [ZERO] * (len(p) - len(q) + 1)
    r = list(p)
    lead = q[-1].inverse()
    for k in range(len(p) - len(q), -1, -1):
        c = r[k + len(q) - 1] * lead
        out[k] = c
        for i, b in enumerate(q):
            r[k + i] = r[k + i] - c * b
    return _ptrim(out), _ptrim(r[: len(q) - 1] or [ZERO])


def _pmonic(p):
    inv = p[-1].inverse()
    return [c * inv for c in p]


def _pgcd(p, q):
    p, q = _ptrim(p), _ptrim(q)
    while not (len(q) == 1 and q[0].is_zero()):
        p, q = q, _pdivmod(p, q)[1]
    return _pmonic(p)


def _squarefree_factors(f):
    """Yun's algorithm: pairs (i, a_i) with f = lead * prod a_i^i, a_i squarefree."""
    f = _ptrim(f)
    if len(f) <= 1:
        return []
    df = _pderiv(f)
    a = _pgcd(f, df)
    b = _pdivmod(f, a)[0]
    c = _pdivmod(df, a)[0]
    d = _psub(c, _pderiv(b))
    out = []
    i = 1
    while len(b) > 1:
        a = _pgcd(b, d)
        b = _pdivmod(b, a)[0]
        c = _pdivmod(d, a)[0]
        d = _psub(c, _pderiv(b))
        if len(a) > 1:
            out.append((i, a))
        i += 1
    return out


def _distinct(values):
    out = []
    for v in values:
        if v not in out:
            out.append(v)
    return out


@dataclass(frozen=True)
class JordanDatum:
    """Blocks (eigenvalue, size) and a transition P with P^-1 X P = blockdiag(J(x, a))."""

    blocks: tuple
    transition: Matrix
    group_tag: str = "gl"
    det_normalized: bool = field(default=True, compare=False)

    @property
    def n(self) -> int:
        return sum(a for _, a in self.blocks)

    def matrix(self) -> Matrix:
        return block_diag(jordan_block(x, a) for x, a in self.blocks)

    def eigenvalues(self) -> list[CycScalar]:
        return [x for x, a in self.blocks for _ in range(a)]

    def trace(self):
        return sum((x * a for x, a in self.blocks), ZERO)

    def block_offsets(self) -> list[int]:
        offs, o = [], 0
        for _, a in self.blocks:
            offs.append(o)
            o += a
        return offs

    def key(self):
        """Comparison key of the block multiset (ignores the transition)."""
        return tuple(sorted((x.sort_key(), a) for x, a in self.blocks))

    def sorted_blocks(self):
        return sorted(self.blocks, key=lambda b: (b[0].sort_key(), -b[1]))

    @classmethod
    def from_blocks(cls, blocks, group_tag="gl") -> "JordanDatum":
        blocks = tuple((as_scalar(x), int(a)) for x, a in blocks)
        n = sum(a for _, a in blocks)
        return cls(blocks, Matrix.identity(n), group_tag)

    @classmethod
    def from_jordan_matrix(cls, X: Matrix, group_tag="gl") -> "JordanDatum":
        blocks = is_jordan_matrix(X)
        if blocks is None:
            raise ValueError("matrix is not in Jordan form")
        return cls(tuple(blocks), Matrix.identity(X.rows), group_tag)


def is_jordan_matrix(X: Matrix):
    """Block list if X is block-diagonal with upper Jordan blocks, else None."""
    if X.is_series:
        if not X.is_constant():
            return None
        X = X.as_scalars()
    n = X.rows
    for i in range(n):
        for j in range(n):
            v = X.entries[i][j]
            if j == i or j == i + 1:
                continue
            if not v.is_zero():
                return None
    blocks = []
    start = 0
    for i in range(n):
        last = i == n - 1
        link = None if last else X.entries[i][i + 1]
        if not last and link == 1:
            if X.entries[i + 1][i + 1] != X.entries[i][i]:
                return None
            continue
        if not last and not link.is_zero():
            return None
        blocks.append((X.entries[start][start], i - start + 1))
        start = i + 1
    return blocks


def _chains(X: Matrix, lam: CycScalar, mult: int):
    """Jordan chains for eigenvalue lam, as (size, [N^(k-1) v, ..., v]) lists."""
    n = X.rows
    N = X - Matrix.identity(n) * lam
    kernels = [[]]
    power = Matrix.identity(n)
    while len(kernels[-1]) < mult:
        power = power @ N
        kernels.append(power.kernel())
        if len(kernels) > n + 1:
            raise VerificationError("generalized eigenspace did not stabilize")
    s = len(kernels) - 1
    chains = []
    for k in range(s, 0, -1):
        span = list(kernels[k - 1])
        for size, chain in chains:
            # element of chain lying in ker N^k minus ker N^(k-1)
            span.append(chain[k - 1])
        base_rank = _rank_of(span)
        for v in kernels[k]:
            trial = span + [v]
            r = _rank_of(trial)
            if r > base_rank:
                span, base_rank = trial, r
                chain = [v]
                for _ in range(k - 1):
                    chain.append(_apply(N, chain[-1]))
                chains.append((k, chain[::-1]))
    return chains


def _apply(M: Matrix, v):
    return [sum((a * b for a, b in zip(row, v)), ZERO) for row in M.entries]


def _rank_of(vectors) -> int:
    if not vectors:
        return 0
    return Matrix([list(v) for v in vectors]).rank()


def jordan_form(X: Matrix, group_tag: str = "gl", eigenvalues=None) -> JordanDatum:
    """Jordan datum of a scalar matrix, blocks in canonical order."""
    if X.is_series:
        X = X.as_scalars()
    if not X.is_square:
        raise DimensionMismatch("Jordan form of a non-square matrix")
    found = find_eigenvalues(X, eigenvalues)
    distinct = _distinct(found)
    distinct.sort(key=lambda x: x.sort_key())
    pieces = []
    for lam in distinct:
        mult = sum(1 for x in found if x == lam)
        for size, chain in _chains(X, lam, mult):
            pieces.append((lam, size, chain))
    pieces.sort(key=lambda t: (t[0].sort_key(), -t[1]))
    cols = [v for _, _, chain in pieces for v in chain]
    P = Matrix.from_columns(cols)
    blocks = tuple((lam, size) for lam, size, _ in pieces)
    normalized = True
    if group_tag == "sl":
        P, normalized = _normalize_det(P, blocks)
    datum = JordanDatum(blocks, P, group_tag, normalized)
    if P.inverse() @ X @ P != datum.matrix():
        raise VerificationError("Jordan transition failed to verify")
    return datum


def _normalize_det(P: Matrix, blocks):
    d = P.det()
    if d == 1:
        return P, True
    cols = P.columns()
    offs, o = [], 0
    for _, a in blocks:
        offs.append(o)
        o += a
    # a size-one block absorbs the factor directly
    for (lam, a), off in zip(blocks, offs):
        if a == 1:
            cols[off] = [x / d for x in cols[off]]
            return Matrix.from_columns(cols), True
    # otherwise rescale a whole chain by an a-th root of 1/d
    for (lam, a), off in zip(blocks, offs):
        c = nth_root(d.inverse(), a)
        if c is not None:
            for k in range(off, off + a):
                cols[k] = [x * c for x in cols[k]]
            return Matrix.from_columns(cols), True
    return P, False


def jordan_decomposition(X: Matrix, datum: JordanDatum | None = None):
    """Semisimple and nilpotent parts (X_s, X_n) of a scalar matrix."""
    if X.is_series:
        X = X.as_scalars()
    datum = datum or jordan_form(X)
    P = datum.transition
    Pinv = P.inverse()
    D = Matrix.diag(datum.eigenvalues())
    Xs = P @ D @ Pinv
    return Xs, X - Xs


def ad_eigenvalues(X) -> list[CycScalar]:
    """The multiset {x_i - x_j} over eigenvalues with multiplicity."""
    eig = X.eigenvalues() if isinstance(X, JordanDatum) else find_eigenvalues(X.as_scalars())
    return [a - b for a in eig for b in eig]


def is_zero_class(X) -> bool:
    """True iff no difference of eigenvalues is a nonzero rational."""
    eig = X.eigenvalues() if isinstance(X, JordanDatum) else find_eigenvalues(X.as_scalars())
    distinct = _distinct(eig)
    for i, a in enumerate(distinct):
        for b in distinct[i + 1:]:
            if rational_part(a - b) is not None:
                return False
    return True
