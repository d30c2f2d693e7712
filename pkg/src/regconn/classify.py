"""Equivalence and relatedness decisions for GL_n and SL_n connections.

SL_n classification is done relative to a base point X in zero-class Jordan
form: a connection A related to X dlog z is trivialized over k((z^(1/l))) by
some b with b[A] = X dlog z, and the W_X-orbit of the constant cocycle
b gamma(b^-1) in the block torus of X is its invariant.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .centralizer import TorsionClass, centralizer_data, semisimple_class_to_torus
from .connection import Connection, GaugeMap, gauge_apply, gauge_relates
from .errors import NotRelated, VerificationError
from .linalg import JordanDatum, Matrix, block_diag, is_jordan_matrix, jordan_form
from .reduce import StandardForm, residue_mod_z, standardize, zero_standardize
from .relatives import cocycle_of, realize_relative
from .scalars import CycScalar, as_scalar, constant_coordinate, nth_root, rational_part
from .series import RamifiedSeries

__all__ = [
    "ShiftMatch",
    "DModuleDecomposition",
    "Classification",
    "shift_match",
    "gl_equivalent",
    "sl_equivalent",
    "related",
    "sl_classify_rel_to",
    "sl_gauge_equivalent",
    "can_map",
    "dmodule_decompose",
    "residue_mod_q",
    "as_datum",
]


def residue_mod_q(x) -> CycScalar:
    """Representative of x mod Q: the constant coordinate is removed."""
    x = as_scalar(x)
    return x - constant_coordinate(x)


def as_datum(X, group_tag="gl") -> JordanDatum:
    """Accept a JordanDatum, or a matrix (Jordan matrices keep their block order)."""
    if isinstance(X, JordanDatum):
        return X
    if isinstance(X, Connection):
        X = X.constant_matrix()
    X = X.as_scalars()
    blocks = is_jordan_matrix(X)
    if blocks is not None:
        return JordanDatum(tuple(blocks), Matrix.identity(X.rows), group_tag)
    return jordan_form(X, group_tag=group_tag)


@dataclass(frozen=True)
class ShiftMatch:
    permutation: tuple  # block b of X goes to block permutation[b] of Y
    shifts: tuple  # y_{perm(b)} - x_b
    mode: str


def shift_match(X, Y, mode: str = "Z") -> ShiftMatch | None:
    X, Y = as_datum(X), as_datum(Y)
    if mode not in ("Z", "Q"):
        raise ValueError("mode must be 'Z' or 'Q'")
    residue = residue_mod_z if mode == "Z" else residue_mod_q
    pool: dict = {}
    for k, (y, a) in enumerate(Y.blocks):
        pool.setdefault((residue(y), a), []).append(k)
    perm, shifts = [], []
    for x, a in X.blocks:
        bucket = pool.get((residue(x), a))
        if not bucket:
            return None
        k = bucket.pop(0)
        perm.append(k)
        shifts.append(rational_part(Y.blocks[k][0] - x))
    if any(pool.values()):
        return None
    return ShiftMatch(tuple(perm), tuple(shifts), mode)


def _permutation_matrix(X: JordanDatum, Y: JordanDatum, perm) -> Matrix:
    """Pi with Pi J_X Pi^-1 = J_X reordered into Y's block order."""
    n = X.n
    xo, yo = X.block_offsets(), Y.block_offsets()
    rows = [[0] * n for _ in range(n)]
    for b, (_, a) in enumerate(X.blocks):
        for k in range(a):
            rows[yo[perm[b]] + k][xo[b] + k] = 1
    return Matrix(rows)


def _block_monomials(datum: JordanDatum, exps) -> GaugeMap:
    per_entry = []
    for (_, a), e in zip(datum.blocks, exps):
        per_entry += [Fraction(e)] * a
    return GaugeMap.diagonal_monomials(per_entry)


def _match_map(X: JordanDatum, Y: JordanDatum, sm: ShiftMatch) -> GaugeMap:
    """g with g[J_X dlog z] = J_Y dlog z, built as T Pi."""
    Pi = _permutation_matrix(X, Y, sm.permutation)
    exps = [None] * len(Y.blocks)
    for b, k in enumerate(sm.permutation):
        exps[k] = sm.shifts[b]
    T = _block_monomials(Y, exps)
    return T @ GaugeMap.constant(Pi)


def _equivalence_witness(X: JordanDatum, Y: JordanDatum):
    sm = shift_match(X, Y, "Z")
    if sm is None:
        return None
    PX, PY = X.transition, Y.transition
    g = GaugeMap.constant(PY) @ _match_map(X, Y, sm) @ GaugeMap.constant(PX.inverse())
    return g


def _source_matrix(D: JordanDatum) -> Matrix:
    P = D.transition
    return P @ D.matrix() @ P.inverse()


def gl_equivalent(X, Y) -> GaugeMap | None:
    """Witness g with g[X dlog z] = Y dlog z over k((z)), or None."""
    X, Y = as_datum(X), as_datum(Y)
    g = _equivalence_witness(X, Y)
    if g is None:
        return None
    A, B = Connection.constant(_source_matrix(X)), Connection.constant(_source_matrix(Y))
    if not gauge_relates(g, A, B) or gauge_apply(g, A) != B:
        raise VerificationError("gl equivalence witness failed to verify")
    return g


def sl_equivalent(X, Y) -> GaugeMap | None:
    """As gl_equivalent, with the witness normalized to determinant one."""
    X, Y = as_datum(X, "sl"), as_datum(Y, "sl")
    g = _equivalence_witness(X, Y)
    if g is None:
        return None
    det = g.matrix.det()
    if not (det.is_exact and det.is_constant()):
        raise VerificationError("sl witness has non-constant determinant")
    c = det.constant_term()
    if c != 1:
        g = _fix_determinant(g, Y, c)
    g = g.with_tag("sl")
    A, B = Connection.constant(_source_matrix(X), "sl"), Connection.constant(_source_matrix(Y), "sl")
    if gauge_apply(g, A) != B:
        raise VerificationError("sl equivalence witness failed to verify")
    return g


def _fix_determinant(g: GaugeMap, Y: JordanDatum, c: CycScalar) -> GaugeMap:
    """Left-multiply by a block scaling in Z(Y) with determinant 1/c."""
    target = c.inverse()
    for b, (_, a) in enumerate(Y.blocks):
        s = target if a == 1 else nth_root(target, a)
        if s is None:
            continue
        scales = [1] * len(Y.blocks)
        scales[b] = s
        diag = []
        for (_, size), v in zip(Y.blocks, scales):
            diag += [v] * size
        P = Y.transition
        z = P @ Matrix.diag(diag) @ P.inverse()
        return GaugeMap.constant(z) @ g
    raise VerificationError(f"cannot absorb determinant {c} into the centralizer")


def related(X, Y) -> bool:
    return shift_match(X, Y, "Q") is not None


@dataclass(frozen=True)
class Classification:
    cls: TorsionClass
    level: int
    cocycle: Matrix
    trivializer: GaugeMap  # exact part of b; b[A] = X dlog z once the alignment witness is applied first
    verified: bool


def _standard_ramified(st: StandardForm):
    """Y and the gauge maps (W, x, t_b) with t_b x W [A] = Y dlog z over k((z^(1/m)))."""
    m = st.m
    W, x, t = st.chain
    t_b = t.pullback(Fraction(1, m))
    return st.X * Fraction(1, m), st.aligned.witness, x, t_b


def sl_classify_rel_to(X, A: Connection, p: int | None = None, standard: StandardForm | None = None) -> Classification:
    """Torsion class of A relative to the zero-class base point X."""
    X = as_datum(X, "sl")
    JX = X.matrix()
    st = standard or standardize(A, "sl", p)
    Y, W, x, t_b = _standard_ramified(st)
    DY = jordan_form(Y, group_tag="sl")
    x3 = GaugeMap.constant(DY.transition.inverse())
    JYd = JordanDatum(DY.blocks, Matrix.identity(DY.n), "sl")
    sm = shift_match(JYd, X, "Q")
    if sm is None:
        raise NotRelated("connection is not related to the base point")
    core = _match_map(JYd, X, sm) @ x3 @ t_b @ x
    l = core.matrix.ramification()
    coc = cocycle_of(core, l, JX)
    cls = semisimple_class_to_torus(JX, coc.value, l, "sl", data=centralizer_data(JX, "sl"))
    # replay the full trivializer on A
    out = A.with_tag("sl")
    verified = True
    try:
        for g in (W, x, t_b, x3, _match_map(JYd, X, sm)):
            out = gauge_apply(g, out)
        target = JX.as_series()
        verified = all(a.agrees_with(b) for r, s in zip(out.coeff.entries, target.entries) for a, b in zip(r, s))
    except Exception:
        verified = False
    if not verified:
        raise VerificationError("trivializing map failed to carry A to the base point")
    return Classification(cls.reduced(), l, coc.value, core, verified)


def _base_point(A: Connection, p=None):
    st = standardize(A, "sl", p)
    zs = zero_standardize(st.X, "sl")
    base = jordan_form(zs.X_prime * Fraction(1, zs.cover * st.m), group_tag="sl")
    return JordanDatum(base.blocks, Matrix.identity(base.n), "sl"), st


def sl_gauge_equivalent(A: Connection, B: Connection, p: int | None = None) -> bool:
    X, stA = _base_point(A, p)
    stB = standardize(B, "sl", p)
    YB = jordan_form(stB.X * Fraction(1, stB.m), group_tag="sl")
    if not related(X, YB):
        return False
    ca = sl_classify_rel_to(X, A, p, standard=stA)
    cb = sl_classify_rel_to(X, B, p, standard=stB)
    return ca.cls == cb.cls


def can_map(Y, X, delta: TorsionClass, p: int | None = None) -> TorsionClass:
    """Transport a class for base X to the corresponding class for base Y."""
    Y, X = as_datum(Y, "sl"), as_datum(X, "sl")
    if not related(X, Y):
        raise NotRelated("base points are not related")
    rel = realize_relative(X.matrix(), delta)
    return sl_classify_rel_to(Y, rel.connection, p).cls


@dataclass(frozen=True)
class DModuleDecomposition:
    summands: tuple  # sorted (residue of x mod Z, size)

    @classmethod
    def from_pairs(cls, pairs) -> "DModuleDecomposition":
        norm = [(residue_mod_z(x), int(a)) for x, a in pairs]
        return cls(tuple(sorted(norm, key=lambda t: (t[0].sort_key(), t[1]))))

    @property
    def rank(self) -> int:
        return sum(a for _, a in self.summands)


def dmodule_decompose(A: Connection, p: int | None = None) -> DModuleDecomposition:
    st = standardize(A.with_tag("gl"), "gl", p)
    assert st.m == 1
    datum = jordan_form(st.X)
    return DModuleDecomposition.from_pairs((-x, a) for x, a in datum.blocks)
