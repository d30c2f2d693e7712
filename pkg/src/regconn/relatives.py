"""Galois cocycles and explicit relatives of X dlog z over SL_n.

gamma is fixed as gamma(z^(1/l)) = zeta_l z^(1/l).  Everything lives over
k((z^(1/l))) with dlog z as reference form, so the trivializing gauge maps
below have fractional exponents rather than living on a separate cover.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .centralizer import TorsionClass, make_class, semisimple_class_to_torus, torsion_elements
from .connection import Connection, GaugeMap, gauge_apply
from .errors import DeterminantConstraint, NotConstant, NotDivisible, NotInCentralizer, NotTorsion, VerificationError
from .linalg import JordanDatum, Matrix, block_diag, is_jordan_matrix
from .series import RamifiedSeries

__all__ = [
    "CocycleRep",
    "Relative",
    "cocycle_of",
    "realize_relative",
    "relatives_list",
    "push_cocycle",
]


@dataclass(frozen=True)
class CocycleRep:
    level: int
    value: Matrix
    base: Matrix

    def torsion_class(self, group_tag="sl") -> TorsionClass:
        return semisimple_class_to_torus(self.base, self.value, self.level, group_tag)


def cocycle_of(b: GaugeMap, l: int, X: Matrix) -> CocycleRep:
    """The constant d = b gamma(b^-1) for a map b with b[A] = X dlog z."""
    X = X.as_scalars()
    prod = b.matrix @ b.inverse.galois_act(l, 1)
    for row in prod.entries:
        for s in row:
            if not s.is_constant():
                raise NotConstant(f"b gamma(b^-1) has a non-constant entry {s}")
            if not s.is_exact:
                # only the known terms are trusted; there must be a constant one
                if s.prec is not None and s.prec <= 0:
                    raise NotConstant("precision too low to read off the constant term")
    d = Matrix([[s.constant_term() for s in row] for row in prod.entries])
    if d @ X != X @ d:
        raise NotInCentralizer("cocycle value does not commute with X")
    if d**l != Matrix.identity(d.rows):
        raise NotTorsion(f"cocycle value has order not dividing {l}")
    return CocycleRep(l, d, X)


@dataclass(frozen=True)
class Relative:
    cls: TorsionClass
    connection: Connection
    witness: GaugeMap  # witness[X dlog z] = connection, over k((z^(1/l)))


def _blocks_of(X: Matrix):
    blocks = is_jordan_matrix(X)
    if blocks is None:
        raise ValueError("X must be in Jordan form")
    return blocks


def realize_relative(X: Matrix, d: TorsionClass) -> Relative:
    X = X.as_scalars()
    blocks = _blocks_of(X)
    if tuple(a for _, a in blocks) != d.sizes:
        raise ValueError("torsion class does not match the Jordan blocks of X")
    l = d.level
    j = d.exponents
    sigma = sum(js * a for js, (_, a) in zip(j, blocks))
    if sigma % l:
        raise DeterminantConstraint(f"sum j_s a_s = {sigma} is not divisible by {l}")
    pieces = []
    exps = []
    r = len(blocks)
    for s, ((x, a), js) in enumerate(zip(blocks, j)):
        shift = Fraction(js, l)
        if s < r - 1:
            pieces.append(_jordan_series(x + shift, a))
            exps += [shift] * a
            continue
        last = Fraction(js - sigma, l)
        rows = []
        for p in range(a):
            row = []
            for q in range(a):
                if p == q:
                    row.append(RamifiedSeries.constant(x + (shift if p < a - 1 else last)))
                elif q == p + 1:
                    row.append(RamifiedSeries({Fraction(sigma, l) if q == a - 1 else 0: 1}))
                else:
                    row.append(RamifiedSeries())
            rows.append(row)
        pieces.append(Matrix(rows, series=True))
        exps += [shift] * (a - 1) + [last]
    rel = Connection(block_diag(pieces), "sl")
    g = GaugeMap.diagonal_monomials(exps, group_tag="sl")
    if gauge_apply(g, Connection.constant(X, "sl")) != rel:
        raise VerificationError("relative witness identity failed")
    return Relative(d, rel, g)


def _jordan_series(x, a):
    from .linalg import jordan_block

    return jordan_block(x, a).as_series()


def relatives_list(X: Matrix, l: int) -> list[Relative]:
    X = X.as_scalars()
    datum = JordanDatum(tuple(_blocks_of(X)), Matrix.identity(X.rows), "sl")
    return [realize_relative(X, c) for c in torsion_elements(X, l, "sl", datum=datum)]


def push_cocycle(c: CocycleRep, m: int) -> CocycleRep:
    if m % c.level:
        raise NotDivisible(f"level {c.level} does not divide {m}")
    return CocycleRep(m, c.value, c.base)
