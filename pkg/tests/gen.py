"""Seeded random generators for connections, gauge maps and Jordan data."""
from __future__ import annotations

import random
from fractions import Fraction

from regconn.connection import Connection, GaugeMap
from regconn.linalg import Matrix, block_diag, jordan_block
from regconn.scalars import root_of_unity
from regconn.series import RamifiedSeries

SMALL = [Fraction(k) for k in (-2, -1, 1, 2)] + [Fraction(1, 2), Fraction(-1, 3)]


def rand_rational(rng: random.Random, num=3, dens=(1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.choice(dens))


def unimodular(rng: random.Random, n: int, steps: int = 4) -> Matrix:
    """Integer matrix of determinant 1 from random row operations."""
    M = Matrix.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        E = Matrix.identity(n) + Matrix.elementary(n, i, j, rng.choice([-1, 1, 2]))
        M = E @ M
    return M


def random_jordan(rng: random.Random, n: int, eigen=None, trace_zero=False) -> Matrix:
    eigen = eigen or [Fraction(k, 2) for k in range(-2, 3)] + [Fraction(1, 3), Fraction(-1, 3)]
    sizes = []
    left = n
    while left:
        a = rng.randint(1, left)
        sizes.append(a)
        left -= a
    vals = [rng.choice(eigen) for _ in sizes]
    if trace_zero:
        tr = sum(v * a for v, a in zip(vals, sizes))
        vals[-1] -= Fraction(tr) / sizes[-1]
    return block_diag(jordan_block(v, a) for v, a in zip(vals, sizes))


def random_first_kind(rng: random.Random, n: int, degree: int, group_tag="gl", density=0.4) -> Connection:
    """A_0 = P J P^-1 with rational eigenvalues, higher coefficients small integers."""
    J = random_jordan(rng, n, trace_zero=(group_tag == "sl"))
    P = unimodular(rng, n)
    A0 = P @ J @ P.inverse()
    entries = [[dict() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if not A0[i, j].is_zero():
                entries[i][j][0] = A0[i, j]
            for r in range(1, degree + 1):
                if rng.random() < density:
                    entries[i][j][r] = rng.choice([-2, -1, 1, 2, Fraction(1, 2)])
    if group_tag == "sl":
        for r in range(1, degree + 1):
            tr = sum((entries[i][i].get(r, 0) for i in range(n)), Fraction(0))
            if tr:
                entries[n - 1][n - 1][r] = entries[n - 1][n - 1].get(r, 0) - tr
    rows = [[RamifiedSeries(e) for e in row] for row in entries]
    return Connection(Matrix(rows, series=True), group_tag)


def elementary_unipotent(n, i, j, c, k) -> GaugeMap:
    """1 + c z^k E_ij and its exact inverse 1 - c z^k E_ij."""
    ident = Matrix.identity(n, series=True)
    E = Matrix.elementary(n, i, j, 1).as_series() * RamifiedSeries({k: c})
    return GaugeMap(ident + E, ident - E, "sl")


def random_holomorphic_gauge(rng: random.Random, n: int, group_tag="sl", factors=2, max_k=2) -> GaugeMap:
    """Product of elementary unipotents over k[z] and a constant of determinant one."""
    g = GaugeMap.constant(unimodular(rng, n, 3), "sl")
    for _ in range(factors):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        g = elementary_unipotent(n, i, j, rng.choice([-1, 1, 2, Fraction(1, 2)]), rng.randint(0, max_k)) @ g
    if group_tag == "gl":
        scale = [rng.choice([1, 2, -1, Fraction(1, 3)]) for _ in range(n)]
        g = GaugeMap.constant(Matrix.diag(scale), "gl") @ g.with_tag("gl")
    return g


def random_laurent_gauge(rng: random.Random, n: int, group_tag="gl") -> GaugeMap:
    """Holomorphic factor times diag(z^(e_i)); for sl the exponents sum to zero."""
    exps = [rng.randint(-1, 1) for _ in range(n)]
    if group_tag == "sl":
        exps[-1] -= sum(exps)
    g = GaugeMap.diagonal_monomials(exps, group_tag=group_tag)
    return g @ random_holomorphic_gauge(rng, n, group_tag, factors=1)


def zeta3():
    return root_of_unity(3, 1)
