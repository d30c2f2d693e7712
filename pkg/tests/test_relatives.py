from fractions import Fraction

import pytest

from regconn.centralizer import make_class, torsion_elements
from regconn.connection import Connection, gauge_apply
from regconn.errors import DeterminantConstraint, NotDivisible
from regconn.linalg import JordanDatum, Matrix, block_diag, jordan_block
from regconn.relatives import cocycle_of, push_cocycle, realize_relative, relatives_list
from regconn.scalars import root_of_unity
from regconn.textio import parse_matrix


def J(*blocks):
    return block_diag(jordan_block(x, a) for x, a in blocks)


def test_two_relatives_of_nilpotent_block():
    rels = relatives_list(jordan_block(0, 2), 2)
    assert len(rels) == 2
    got = {r.cls.exponents: r.connection.coeff for r in rels}
    assert got[(0,)] == parse_matrix("[[0, 1], [0, 0]]")
    assert got[(1,)] == parse_matrix("[[1/2, z], [0, -1/2]]")


@pytest.mark.parametrize(
    "X",
    [J((0, 2)), J((0, 1), (0, 1)), J((0, 2), (0, 1)), J((root_of_unity(3), 1), (-root_of_unity(3), 1)), J((0, 3))],
)
@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_witness_and_cocycle_round_trip(X, l):
    datum = JordanDatum.from_jordan_matrix(X, "sl")
    for cls in torsion_elements(X, l, "sl", datum=datum):
        rel = realize_relative(X, cls)
        assert gauge_apply(rel.witness, Connection.constant(X, "sl")) == rel.connection
        # b = witness^-1 carries the relative back to X; its cocycle recovers the class
        coc = cocycle_of(rel.witness.inverted(), l, X)
        assert coc.torsion_class() == cls


def test_determinant_constraint():
    X = jordan_block(0, 2)
    bad = make_class(JordanDatum.from_jordan_matrix(X), (1,), 3, "sl")
    with pytest.raises(DeterminantConstraint):
        realize_relative(X, bad)


def test_push_cocycle():
    X = jordan_block(0, 2)
    rel = relatives_list(X, 2)[1]
    coc = cocycle_of(rel.witness.inverted(), 2, X)
    pushed = push_cocycle(coc, 4)
    assert pushed.level == 4 and pushed.torsion_class() == coc.torsion_class()
    with pytest.raises(NotDivisible):
        push_cocycle(coc, 3)
