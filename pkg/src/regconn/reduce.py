"""Standard and zero standard forms via cocharacters of the diagonal torus.

Connections over a cover are handled in the cover variable w with z = w^m
(so ``pullback(m, A)`` has integer exponents).  ``ramified`` converts such
data to the single-coordinate picture over k((z^(1/m))).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import floor, gcd

from .align import AlignedConnection, align
from .connection import Connection, GaugeMap, gauge_apply, gauge_relates, pullback
from .errors import VerificationError
from .linalg import JordanDatum, Matrix, is_jordan_matrix, is_zero_class, jordan_form
from .scalars import CycScalar, as_scalar, rational_part
from .scalars import constant_coordinate

__all__ = [
    "CocharSolution",
    "StandardForm",
    "ZeroStandardForm",
    "find_cocharacter",
    "standardize",
    "zero_standardize",
    "residue_mod_z",
    "integral_classes",
    "torus_element",
    "replay",
]


def residue_mod_z(x) -> CycScalar:
    """Representative of x mod Z: the constant coordinate is brought into [0, 1)."""
    x = as_scalar(x)
    return x - floor(constant_coordinate(x))


def integral_classes(h) -> list[list[int]]:
    """Index classes under i ~ j iff h_i - h_j is an integer, ordered by first index."""
    classes: list[list[int]] = []
    for i, x in enumerate(h):
        for c in classes:
            q = rational_part(x - h[c[0]])
            if q is not None and q.denominator == 1:
                c.append(i)
                break
        else:
            classes.append([i])
    return classes


@dataclass(frozen=True)
class CocharSolution:
    multiplier: int
    exponents: tuple[int, ...]
    lattice: str

    def torus(self) -> GaugeMap:
        """t = psi(z^-1) = diag(z^(-f_i))."""
        return torus_element(self.exponents, self.lattice)

    def y_matrix(self) -> Matrix:
        """z d/dz(t) t^-1 = diag(-f_i)."""
        return Matrix.diag([-f for f in self.exponents])

    def satisfies(self, h) -> bool:
        f, m = self.exponents, self.multiplier
        for i in range(len(h)):
            for j in range(len(h)):
                q = rational_part(as_scalar(h[i]) - h[j])
                if q is not None and q.denominator == 1 and f[i] - f[j] != m * q:
                    return False
        return self.lattice == "gl" or sum(f) == 0


def torus_element(f, group_tag="gl") -> GaugeMap:
    return GaugeMap.diagonal_monomials([-e for e in f], group_tag=group_tag)


def _gcd_all(xs):
    return reduce(gcd, xs, 0)


def _pick_offsets(sizes, target):
    """Integers g_c with sum n_c g_c = target, chosen greedily small in class order."""
    g = []
    remaining = target
    for k, n_c in enumerate(sizes):
        rest = _gcd_all(sizes[k + 1:])
        if rest == 0:
            assert remaining % n_c == 0
            g.append(remaining // n_c)
            remaining = 0
            continue
        cand = 0
        step = 0
        while True:
            if (remaining - n_c * cand) % rest == 0:
                break
            step += 1
            cand = (step + 1) // 2 if step % 2 else -(step // 2)
        g.append(cand)
        remaining -= n_c * cand
    return g


def find_cocharacter(h, lattice: str = "gl") -> CocharSolution:
    """Minimal m and integral f with f_i - f_j = m (h_i - h_j) on integral pairs.

    Each integral class is anchored at its residue representative rho_c, so
    f_i = m (h_i - rho_c) + g_c; for sl the g_c solve sum f = 0.
    """
    h = [as_scalar(x) for x in h]
    classes = integral_classes(h)
    offsets = [0] * len(h)
    for c in classes:
        rho = residue_mod_z(h[c[0]])
        for i in c:
            offsets[i] = int(rational_part(h[i] - rho))
    if lattice == "gl":
        return CocharSolution(1, tuple(offsets), "gl")
    if lattice != "sl":
        raise ValueError(f"lattice must be 'gl' or 'sl', not {lattice!r}")
    sizes = [len(c) for c in classes]
    S = sum(offsets)
    d = _gcd_all(sizes)
    m = next(k for k in range(1, d + 1) if (k * S) % d == 0)
    g = _pick_offsets(sizes, -m * S)
    f = [0] * len(h)
    for c, gc in zip(classes, g):
        for i in c:
            f[i] = m * offsets[i] + gc
    sol = CocharSolution(m, tuple(f), "sl")
    assert sol.satisfies(h) and sum(f) == 0
    return sol


def replay(chain, A: Connection) -> Connection:
    for g in chain:
        A = gauge_apply(g, A)
    return A


def _agrees(A: Connection, X: Matrix) -> bool:
    target = X.as_series()
    return all(a.agrees_with(b) for r, s in zip(A.coeff.entries, target.entries) for a, b in zip(r, s))


@dataclass(frozen=True)
class StandardForm:
    """t[x[iota_m(W)[iota_m(A)]]] = X dlog w, with w^m = z."""

    m: int
    X: Matrix
    chain: tuple
    cochar: CocharSolution
    aligned: AlignedConnection
    lattice: str
    precision: Fraction | None
    verified: bool = field(default=True)

    def __iter__(self):
        return iter((self.m, self.X, list(self.chain)))

    def composite(self) -> GaugeMap:
        g = self.chain[0]
        for h in self.chain[1:]:
            g = h @ g
        return g


@dataclass(frozen=True)
class ZeroStandardForm:
    """t[x[iota_cover(X dlog z)]] = X' dlog w."""

    cover: int
    X_prime: Matrix
    chain: tuple
    cochar: CocharSolution
    l: int
    jordan: JordanDatum
    lattice: str

    def __iter__(self):
        return iter((self.cover, self.X_prime, list(self.chain)))


def _conjugator(A0: Matrix, lattice: str):
    """Constant x with x A0 x^-1 in Jordan form, plus the Jordan datum."""
    blocks = is_jordan_matrix(A0)
    n = A0.rows
    if blocks is not None:
        return GaugeMap.identity(n, lattice), JordanDatum(tuple(blocks), Matrix.identity(n), lattice)
    datum = jordan_form(A0, group_tag=lattice)
    P = datum.transition
    tag = lattice if datum.det_normalized else "gl"
    return GaugeMap(P.inverse().as_series(), P.as_series(), tag), datum


def standardize(A: Connection, lattice: str = "gl", p: int | None = None, eigenvalues=None) -> StandardForm:
    A = A.with_tag(lattice)
    al = align(A, p, eigenvalues)
    n = A.n
    base = al.base
    if al.s_part.is_diagonal():
        x = GaugeMap.identity(n, lattice)
        h = al.s_part.diagonal()
    else:
        x, datum = _conjugator(al.base.constant_matrix(), lattice)
        h = datum.eigenvalues()
    conj = gauge_apply(x, base)
    sol = find_cocharacter(h, lattice)
    m = sol.multiplier
    t = sol.torus()
    total = Matrix.zero(n)
    for e in conj.exponents():
        total = total + conj.coefficient(e)
    X = total * m + sol.y_matrix()
    if gauge_apply(t, pullback(m, conj)) != Connection.constant(X, lattice):
        raise VerificationError("torus step did not produce a constant connection")
    chain = (al.witness.pullback(m), x, t)
    out = replay(chain, pullback(m, A))
    if not _agrees(out, X):
        raise VerificationError("standard form chain failed to replay")
    prec = out.precision
    return StandardForm(m, X, chain, sol, al, lattice, prec)


def zero_standardize(X: Matrix, lattice: str = "gl", eigenvalues=None) -> ZeroStandardForm:
    X = X.as_scalars()
    n = X.rows
    blocks = is_jordan_matrix(X)
    if blocks is not None:
        x = GaugeMap.identity(n, lattice)
        datum = JordanDatum(tuple(blocks), Matrix.identity(n), lattice)
    else:
        if eigenvalues is not None:
            datum = jordan_form(X, group_tag=lattice, eigenvalues=eigenvalues)
            P = datum.transition
            x = GaugeMap(P.inverse().as_series(), P.as_series(), lattice if datum.det_normalized else "gl")
        else:
            x, datum = _conjugator(X, lattice)
    J = datum.matrix()
    d = datum.eigenvalues()
    l = 1
    for a in d:
        for b in d:
            q = rational_part(a - b)
            if q is not None:
                l = l * q.denominator // gcd(l, q.denominator)
    sol = find_cocharacter([a * l for a in d], lattice)
    cover = sol.multiplier * l
    Xp = J * cover + sol.y_matrix()
    if not is_zero_class(Xp):
        raise AssertionError("zero standard form is not zero-class")
    chain = (x, sol.torus())
    out = replay(chain, pullback(cover, Connection.constant(X, lattice)))
    if out != Connection.constant(Xp, lattice):
        raise VerificationError("zero standard form chain failed to replay")
    return ZeroStandardForm(cover, Xp, chain, sol, l, datum, lattice)
