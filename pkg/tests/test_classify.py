import random
from fractions import Fraction

import pytest

from regconn.centralizer import make_class, torsion_elements
from regconn.classify import (
    DModuleDecomposition,
    as_datum,
    can_map,
    dmodule_decompose,
    gl_equivalent,
    related,
    shift_match,
    sl_classify_rel_to,
    sl_equivalent,
    sl_gauge_equivalent,
)
from regconn.connection import Connection, gauge_apply
from regconn.errors import NotRelated
from regconn.linalg import JordanDatum, Matrix, block_diag, jordan_block
from regconn.relatives import realize_relative
from regconn.scalars import as_scalar, root_of_unity
from regconn.series import RamifiedSeries
from regconn.textio import parse_matrix

from gen import random_holomorphic_gauge

Z3 = root_of_unity(3)


def D(*blocks, tag="gl"):
    return JordanDatum.from_blocks(blocks, tag)


def J(*blocks):
    return block_diag(jordan_block(x, a) for x, a in blocks)


def test_shift_match_examples():
    sm = shift_match(D((Fraction(1, 2), 1), (Fraction(-1, 2), 1)), D((Fraction(3, 2), 1), (Fraction(-3, 2), 1)))
    assert sm.shifts == (1, -1)
    assert shift_match(D((0, 2)), D((0, 1), (0, 1))) is None
    X = D((Z3, 1), (0, 2))
    assert shift_match(X, X).shifts == (0, 0)


def test_gl_and_sl_equivalence_witnesses():
    X = Matrix.diag([Fraction(1, 2), Fraction(-1, 2)])
    Y = Matrix.diag([Fraction(3, 2), Fraction(-3, 2)])
    g = gl_equivalent(X, Y)
    assert g.matrix == parse_matrix("[[z, 0], [0, z^-1]]")
    s = sl_equivalent(X, Y)
    assert s.matrix.det() == RamifiedSeries.constant(1)
    assert gauge_apply(s, Connection.constant(X, "sl")) == Connection.constant(Y, "sl")
    assert gl_equivalent(jordan_block(0, 2), jordan_block(Fraction(1, 2), 2)) is None
    assert gl_equivalent(X, X).matrix == Matrix.identity(2, series=True)
    assert sl_equivalent(jordan_block(0, 2), X) is None


def test_sl_equivalence_fixes_determinant_of_conjugated_input():
    P = Matrix([[2, 1], [1, 1]])
    X = P @ Matrix.diag([Fraction(1, 2), Fraction(-1, 2)]) @ P.inverse()
    Y = Matrix([[Fraction(-1, 2), 0], [3, Fraction(1, 2)]])
    g = sl_equivalent(X, Y)
    assert g is not None and g.group_tag == "sl"
    assert gauge_apply(g, Connection.constant(X, "sl")) == Connection.constant(Y, "sl")


def test_related_examples():
    assert related(Matrix.diag([Fraction(1, 2), Fraction(-1, 2)]), Matrix.zero(2))
    assert related(jordan_block(0, 2), jordan_block(Fraction(1, 3), 2))
    assert not related(jordan_block(0, 2), jordan_block(Z3, 2))


def test_diagonal_sl_orbits():
    # diagonal trace-zero X, Y: sl-equivalent iff Z-shift-matched, related iff Q-shift-matched
    vals = [0, Fraction(1, 2), Fraction(1, 3), 1, Fraction(3, 2), Z3, Z3 + Fraction(1, 2)]
    for a in vals:
        for b in vals:
            X = Connection.constant(Matrix.diag([a, -as_scalar(a)]), "sl")
            Y = Connection.constant(Matrix.diag([b, -as_scalar(b)]), "sl")
            zmatch = shift_match(X, Y, "Z") is not None
            assert sl_gauge_equivalent(X, Y) == zmatch
            assert related(X, Y) == (shift_match(X, Y, "Q") is not None)


def test_classify_examples():
    X = jordan_block(0, 2)
    A = Connection(parse_matrix("[[1/2, z], [0, -1/2]]"), "sl")
    res = sl_classify_rel_to(X, A)
    assert res.verified and res.cls.level == 2 and res.cls.exponents == (1,)
    triv = sl_classify_rel_to(X, Connection.constant(X, "sl"))
    assert triv.cls.is_trivial()
    with pytest.raises(NotRelated):
        sl_classify_rel_to(J((Z3, 1), (-Z3, 1)), A)


@pytest.mark.parametrize("X", [J((0, 2)), J((0, 1), (0, 1)), J((Z3, 1), (-Z3, 1)), J((0, 2), (0, 1))])
@pytest.mark.parametrize("l", [2, 3])
def test_classify_realized_relatives(X, l):
    for cls in torsion_elements(X, l, "sl"):
        rel = realize_relative(X, cls)
        assert sl_classify_rel_to(X, rel.connection).cls == cls.reduced()


def test_sl_gauge_equivalence_examples():
    A1 = Connection(parse_matrix("[[0, 1], [0, 0]]"), "sl")
    A2 = Connection(parse_matrix("[[1/2, z], [0, -1/2]]"), "sl")
    assert not sl_gauge_equivalent(A1, A2) and not sl_gauge_equivalent(A2, A1)
    assert sl_gauge_equivalent(A1, A1) and sl_gauge_equivalent(A2, A2)
    B = Connection.constant(Matrix.diag([Fraction(1, 2), Fraction(-1, 2)]), "sl")
    C = Connection.constant(Matrix.diag([Fraction(3, 2), Fraction(-3, 2)]), "sl")
    assert sl_gauge_equivalent(B, C)


def test_sl_equivalence_relation_spot_checks():
    rng = random.Random(7)
    pool = [
        Connection(parse_matrix("[[0, 1], [0, 0]]"), "sl"),
        Connection(parse_matrix("[[1/2, z], [0, -1/2]]"), "sl"),
        Connection.constant(Matrix.diag([Fraction(1, 2), Fraction(-1, 2)]), "sl"),
        Connection.constant(Matrix.zero(2), "sl"),
    ]
    pool += [gauge_apply(random_holomorphic_gauge(rng, 2), A) for A in pool]
    eq = [[sl_gauge_equivalent(a, b) for b in pool] for a in pool]
    n = len(pool)
    for i in range(n):
        assert eq[i][i]
        assert eq[i][i + 4 if i < 4 else i - 4]
        for j in range(n):
            assert eq[i][j] == eq[j][i]
            for k in range(n):
                if eq[i][j] and eq[j][k]:
                    assert eq[i][k]


def test_can_map_transports_and_is_functorial():
    X = J((Z3, 1), (-Z3, 1))
    Y = J((Z3 + Fraction(1, 2), 1), (-Z3 - Fraction(1, 2), 1))
    Zm = J((Z3 + Fraction(1, 3), 1), (-Z3 - Fraction(1, 3), 1))
    for l in (2, 6):
        for delta in torsion_elements(X, l, "sl"):
            delta = delta.reduced()
            assert can_map(X, X, delta) == delta
            yd = can_map(Y, X, delta)
            assert can_map(X, Y, yd) == delta
            assert can_map(Zm, Y, yd) == can_map(Zm, X, delta)
    triv = make_class(as_datum(X, "sl"), (0, 0), 1, "sl")
    assert not can_map(Y, X, triv).is_trivial()


def test_dmodule_examples():
    assert dmodule_decompose(Connection.constant(-jordan_block(0, 2))) == DModuleDecomposition.from_pairs([(0, 2)])
    dec = dmodule_decompose(Connection.constant(Matrix.diag([Fraction(-1, 2), Fraction(1, 2)])))
    assert dec.summands == ((as_scalar(Fraction(1, 2)), 1), (as_scalar(Fraction(1, 2)), 1))
    assert dec.rank == 2
