"""Gauge a first-kind connection to an aligned one.

Order by order, the part of A_r outside the r-eigenspace of ad A_{0,s} is
removed by a gauge map 1 + B z^r with (ad A_0 - r) B equal to that part.  The
work happens on coefficient lists of constant matrices in a Jordan basis of
A_0, where the eigenspaces of ad A_{0,s} are spanned by matrix units.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .connection import Connection, GaugeMap, classify_shape, gauge_relates
from .errors import InsufficientPrecision, RegconnError, VerificationError
from .linalg import JordanDatum, Matrix, jordan_form
from .scalars import ZERO, as_scalar, rational_part
from .series import RamifiedSeries

__all__ = ["AlignedConnection", "align", "max_integer_ad_eigenvalue", "default_precision", "is_aligned"]


@dataclass(frozen=True)
class AlignedConnection:
    base: Connection
    s_part: Matrix
    witness: GaugeMap
    jordan: JordanDatum
    r_max: int
    precision: Fraction | None  # None when the witness identity holds exactly
    truncated_input: bool = False


def max_integer_ad_eigenvalue(eigenvalues) -> int:
    best = 0
    for a in eigenvalues:
        for b in eigenvalues:
            q = rational_part(a - b)
            if q is not None and q.denominator == 1 and q > best:
                best = int(q)
    return best


def default_precision(A: Connection, r_max: int) -> int:
    deg = A.coeff.exponents()
    top = int(max(deg)) if deg else 0
    return 2 * (top + A.n + r_max)


def _zero(n):
    return Matrix.zero(n)


def _coeff_list(A: Connection, upto: int):
    return [A.coefficient(r) if A.precision is None or r < A.precision else _zero(A.n) for r in range(upto)]


def is_aligned(A: Connection, s_part: Matrix | None = None) -> bool:
    if s_part is None:
        from .linalg import jordan_decomposition

        s_part, _ = jordan_decomposition(A.constant_matrix())
    for e in A.exponents():
        if e.denominator != 1 or e < 0:
            return False
        Ar = A.coefficient(e)
        if s_part @ Ar - Ar @ s_part != Ar * as_scalar(e):
            return False
    return True


def align(A: Connection, p: int | None = None, eigenvalues=None) -> AlignedConnection:
    """Aligned form of a first-kind connection together with a witness gauge map."""
    if not classify_shape(A).first_kind:
        raise RegconnError("align needs a connection of the first kind")
    exps = A.exponents()
    if any(e.denominator != 1 for e in exps):
        raise RegconnError("align works over k((z)); pass the connection in its cover variable")
    n = A.n
    A0 = A.constant_matrix()
    datum = jordan_form(A0, eigenvalues=eigenvalues)
    P = datum.transition
    Pinv = P.inverse()
    d = datum.eigenvalues()
    r_max = max_integer_ad_eigenvalue(d)
    deg = int(max(exps)) if exps else 0
    truncated_input = not A.is_exact
    if p is None:
        p = default_precision(A, r_max)
    if truncated_input:
        if A.precision <= r_max:
            raise InsufficientPrecision(f"input known to precision {A.precision}, alignment needs more than {r_max}")
        p = min(p, int(A.precision))
    elif p < max(deg, r_max) + 1:
        raise InsufficientPrecision(f"precision {p} is below max(degree, r_max) + 1 = {max(deg, r_max) + 1}")

    # coefficients in the Jordan basis
    C = [Pinv @ M @ P for M in _coeff_list(A, p)]
    J = C[0]
    Nj = J - Matrix.diag(d)
    diff = [[d[i] - d[j] for j in range(n)] for i in range(n)]
    W = [Matrix.identity(n)] + [_zero(n) for _ in range(p - 1)]
    w_exact = True

    for r in range(1, p):
        Cr = C[r]
        if Cr.is_zero():
            continue
        B = _zero(n)
        groups = {}
        for i in range(n):
            for j in range(n):
                lam = diff[i][j]
                if lam != r and not Cr.entries[i][j].is_zero():
                    groups.setdefault(lam, []).append((i, j))
        for lam in sorted(groups, key=lambda x: x.sort_key()):
            mask = {(i, j) for i in range(n) for j in range(n) if diff[i][j] == lam}
            comp = Matrix([[Cr.entries[i][j] if (i, j) in mask else ZERO for j in range(n)] for i in range(n)])
            B = B + _solve_shifted(Nj, comp, lam - r)
        if B.is_zero():
            continue
        C = _apply_unipotent(C, B, r, p)
        W, dropped = _left_multiply(W, B, r, p)
        w_exact = w_exact and not dropped

    aligned = [C[r] for r in range(r_max + 1)]
    for r in range(r_max + 1, p):
        if not C[r].is_zero():
            raise VerificationError(f"nonresonant coefficient survived at order {r}")
    back = [P @ M @ Pinv for M in aligned]
    base = Connection(_series_matrix(back), A.group_tag if A.group_tag == "gl" else "sl")
    Wm = [P @ M @ Pinv for M in W]
    s_part = P @ Matrix.diag(d) @ Pinv

    witness, prec = _build_witness(Wm, w_exact, A, base, p, truncated_input)
    return AlignedConnection(base, s_part, witness, datum, r_max, prec, truncated_input)


def _solve_shifted(N: Matrix, C: Matrix, mu):
    """Solve mu B + [N, B] = C for nilpotent N and mu != 0 by a Neumann series."""
    inv = as_scalar(mu).inverse()
    term = C * inv
    total = term
    for _ in range(2 * N.rows + 1):
        term = -(N @ term - term @ N) * inv
        if term.is_zero():
            return total
        total = total + term
    raise VerificationError("Neumann series failed to terminate")


def _apply_unipotent(C, B, r, p):
    """Coefficients of (1 + B z^r)[A] truncated at order p."""
    n = B.rows
    # g A + z dg/dz
    GA = [C[k] + (B @ C[k - r] if k >= r else _zero(n)) for k in range(p)]
    GA[r] = GA[r] + B * r
    # times g^-1 = sum (-B)^k z^(rk)
    out = list(GA)
    power = Matrix.identity(n)
    k = 1
    while r * k < p:
        power = power @ (-B)
        if power.is_zero():
            break
        for e in range(r * k, p):
            if not GA[e - r * k].is_zero():
                out[e] = out[e] + GA[e - r * k] @ power
        k += 1
    return out


def _left_multiply(W, B, r, p):
    new = list(W)
    dropped = False
    for k in range(len(W)):
        if W[k].is_zero():
            continue
        prod = B @ W[k]
        if k + r < p:
            new[k + r] = new[k + r] + prod
        elif not prod.is_zero():
            dropped = True
    return new, dropped


def _series_matrix(coeffs, prec=None):
    n = coeffs[0].rows
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            terms = {k: M.entries[i][j] for k, M in enumerate(coeffs) if not M.entries[i][j].is_zero()}
            row.append(RamifiedSeries(terms, prec))
        entries.append(row)
    return Matrix(entries, series=True)


def _build_witness(Wm, w_exact, A, base, p, truncated_input):
    tag = A.group_tag
    if w_exact and not truncated_input:
        g_mat = _series_matrix(Wm)
        if _exact_identity(g_mat, A, base):
            det = g_mat.det()
            exact_inv = det.is_exact and len(det.terms) == 1
            inv = g_mat.inverse_to_precision(None if exact_inv else p)
            return GaugeMap(g_mat, inv, tag), None
    g_mat = _series_matrix(Wm, p)
    g = GaugeMap(g_mat, g_mat.inverse_to_precision(p), tag)
    if not gauge_relates(g, A, base):
        raise VerificationError("alignment witness failed to verify")
    return g, Fraction(p)


def _exact_identity(W, A, B):
    lhs = W @ A.coeff + W.z_ddz()
    rhs = B.coeff @ W
    return lhs == rhs
