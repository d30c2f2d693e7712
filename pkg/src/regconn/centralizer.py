"""Centralizer structure of a matrix X: filtrations, block torus, Weyl groups.

For an eigenvalue lam of X the spaces E_lam^i = ker(X - lam) cap im(X - lam)^i
form a decreasing filtration whose quotients count Jordan blocks of size
i + 1.  Semisimple elements of the centralizer are read off from their action
on these quotients.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product

from .errors import EnumerationBoundExceeded, NotInCentralizer, NotTorsion, VerificationError
from .linalg import JordanDatum, Matrix, block_diag, is_jordan_matrix, jordan_form
from .scalars import ONE, ZERO, root_of_unity

__all__ = [
    "CentralizerData",
    "TorsionClass",
    "centralizer_data",
    "torsion_elements",
    "semisimple_class_to_torus",
    "torus_matrix",
    "ENUMERATION_BOUND",
]

ENUMERATION_BOUND = 10**6


def _datum_for(X: Matrix, group_tag="gl") -> JordanDatum:
    blocks = is_jordan_matrix(X)
    if blocks is not None:
        return JordanDatum(tuple(blocks), Matrix.identity(X.rows), group_tag)
    return jordan_form(X, group_tag=group_tag)


def _weyl_groups(blocks):
    groups: dict = {}
    for b, (x, a) in enumerate(blocks):
        groups.setdefault((x.sort_key(), a), []).append(b)
    return tuple(tuple(v) for _, v in sorted(groups.items()))


def _basis(vectors):
    """Linearly independent subset spanning the same space."""
    out = []
    for v in vectors:
        if Matrix([list(w) for w in out + [v]]).rank() > len(out):
            out.append(list(v))
    return out


def _column_space(M: Matrix):
    return _basis(M.columns())


def _intersect(U, V, n):
    if not U or not V:
        return []
    cols = [list(u) for u in U] + [[-x for x in v] for v in V]
    M = Matrix.from_columns(cols)
    out = []
    for coef in M.kernel():
        w = [sum((coef[k] * U[k][i] for k in range(len(U))), ZERO) for i in range(n)]
        out.append(w)
    return _basis(out)


@dataclass(frozen=True)
class CentralizerData:
    jordan: JordanDatum
    torus_coords: tuple  # block index per torus coordinate
    weyl_orbits: tuple  # block indices grouped by equal (eigenvalue, size)
    filtration: dict  # eigenvalue -> [basis of E^0, E^1, ...]

    def quotient_dims(self, lam):
        spaces = self.filtration[lam]
        return [len(spaces[i]) - (len(spaces[i + 1]) if i + 1 < len(spaces) else 0) for i in range(len(spaces))]

    @property
    def torus_dim(self) -> int:
        return len(self.torus_coords)


def centralizer_data(X: Matrix, group_tag="gl") -> CentralizerData:
    X = X.as_scalars()
    datum = _datum_for(X, group_tag)
    n = X.rows
    filtration = {}
    seen = []
    for x, _ in datum.blocks:
        if x in seen:
            continue
        seen.append(x)
        N = X - Matrix.identity(n) * x
        ker = N.kernel()
        spaces = [_basis(ker)]
        power = Matrix.identity(n)
        while True:
            power = power @ N
            E = _intersect(spaces[0], _column_space(power), n) if not power.is_zero() else []
            if not E:
                break
            spaces.append(E)
        filtration[x] = spaces
    data = CentralizerData(datum, tuple(range(len(datum.blocks))), _weyl_groups(datum.blocks), filtration)
    for lam in filtration:
        dims = data.quotient_dims(lam)
        for i, q in enumerate(dims):
            count = sum(1 for x, a in datum.blocks if x == lam and a == i + 1)
            if q != count:
                raise VerificationError(f"quotient dimension {q} at level {i} disagrees with {count} blocks")
    return data


@dataclass(frozen=True, eq=False)
class TorsionClass:
    """W_X-orbit of diag-per-block roots of unity omega_l^(j_b)."""

    level: int
    exponents: tuple
    sizes: tuple
    groups: tuple
    group_tag: str = "gl"

    def __post_init__(self):
        exps = list(e % self.level for e in self.exponents)
        for g in self.groups:
            vals = sorted(exps[b] for b in g)
            for b, v in zip(g, vals):
                exps[b] = v
        object.__setattr__(self, "exponents", tuple(exps))

    def fractions(self):
        return tuple(Fraction(j, self.level) for j in self.exponents)

    def key(self):
        return (self.sizes, self.groups, self.fractions())

    def __eq__(self, other):
        return isinstance(other, TorsionClass) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def reduced(self) -> "TorsionClass":
        """The same class at the smallest level."""
        fr = self.fractions()
        l = 1
        for q in fr:
            l = l * q.denominator // _gcd(l, q.denominator)
        return TorsionClass(l, tuple(int(q * l) for q in fr), self.sizes, self.groups, self.group_tag)

    def at_level(self, m: int) -> "TorsionClass":
        if m % self.level:
            from .errors import NotDivisible

            raise NotDivisible(f"level {self.level} does not divide {m}")
        k = m // self.level
        return TorsionClass(m, tuple(j * k for j in self.exponents), self.sizes, self.groups, self.group_tag)

    def sigma(self) -> int:
        return sum(j * a for j, a in zip(self.exponents, self.sizes))

    def is_trivial(self) -> bool:
        return all(j == 0 for j in self.exponents)

    def __repr__(self):
        return f"TorsionClass(level={self.level}, exponents={self.exponents})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def make_class(datum: JordanDatum, exponents, level: int, group_tag="gl") -> TorsionClass:
    return TorsionClass(level, tuple(exponents), tuple(a for _, a in datum.blocks), _weyl_groups(datum.blocks), group_tag)


def torsion_elements(X: Matrix, l: int, group_tag: str = "gl", datum: JordanDatum | None = None) -> list[TorsionClass]:
    datum = datum or _datum_for(X.as_scalars(), group_tag)
    blocks = datum.blocks
    if l ** len(blocks) > ENUMERATION_BOUND:
        raise EnumerationBoundExceeded(f"{l}^{len(blocks)} torus points exceed the bound {ENUMERATION_BOUND}")
    groups = _weyl_groups(blocks)
    sizes = tuple(a for _, a in blocks)
    out = []
    per_group = [list(combinations_with_replacement(range(l), len(g))) for g in groups]
    for choice in product(*per_group):
        exps = [0] * len(blocks)
        for g, vals in zip(groups, choice):
            for b, v in zip(g, vals):
                exps[b] = v
        if group_tag == "sl" and sum(j * a for j, a in zip(exps, sizes)) % l:
            continue
        out.append(TorsionClass(l, tuple(exps), sizes, groups, group_tag))
    return out


def torus_matrix(datum: JordanDatum, cls: TorsionClass) -> Matrix:
    """The element d of T_X realizing a class, in the basis of the original X."""
    D = block_diag(Matrix.identity(a) * root_of_unity(cls.level, j) for (_, a), j in zip(datum.blocks, cls.exponents))
    P = datum.transition
    return P @ D @ P.inverse()


def _order(d: Matrix, bound: int = 720) -> int:
    ident = Matrix.identity(d.rows)
    power = d
    for k in range(1, bound + 1):
        if power == ident:
            return k
        power = power @ d
    raise NotTorsion(f"no d^k = 1 for k <= {bound}")


def semisimple_class_to_torus(X: Matrix, d: Matrix, l: int | None = None, group_tag: str = "gl",
                              data: CentralizerData | None = None) -> TorsionClass:
    X = X.as_scalars()
    d = d.as_scalars()
    if X @ d != d @ X:
        raise NotInCentralizer("d does not commute with X")
    if l is None:
        l = _order(d)
    elif d**l != Matrix.identity(d.rows):
        raise NotTorsion(f"d^{l} is not the identity")
    data = data or centralizer_data(X, group_tag)
    datum = data.jordan
    n = X.rows
    exps = [None] * len(datum.blocks)
    for lam, spaces in data.filtration.items():
        for i, E in enumerate(spaces):
            below = spaces[i + 1] if i + 1 < len(spaces) else []
            comp = []
            span = [list(v) for v in below]
            for v in E:
                if Matrix(span + [v]).rank() > len(span):
                    span.append(v)
                    comp.append(v)
            if not comp:
                continue
            basis = [list(v) for v in below] + comp
            B = Matrix.from_columns(basis)
            k = len(comp)
            cols = []
            for v in comp:
                dv = [sum((d.entries[r][c] * v[c] for c in range(n)), ZERO) for r in range(n)]
                coords = B.solve(dv)
                if coords is None:
                    raise NotInCentralizer("d does not preserve the filtration")
                cols.append(coords[len(below):])
            M = Matrix.from_columns(cols)
            found = []
            for j in range(l):
                mult = k - (M - Matrix.identity(k) * root_of_unity(l, j)).rank()
                found += [j] * mult
            if len(found) != k:
                raise VerificationError("quotient map is not diagonalizable over the roots of unity")
            targets = [b for b, (x, a) in enumerate(datum.blocks) if x == lam and a == i + 1]
            for b, j in zip(targets, found):
                exps[b] = j
    if any(e is None for e in exps):
        raise VerificationError("some Jordan block received no torus coordinate")
    return make_class(datum, exps, l, group_tag)
