import random
from fractions import Fraction
from itertools import product

import pytest

from regconn.centralizer import (
    centralizer_data,
    make_class,
    semisimple_class_to_torus,
    torsion_elements,
    torus_matrix,
)
from regconn.errors import EnumerationBoundExceeded, NotDivisible, NotInCentralizer, NotTorsion
from regconn.linalg import JordanDatum, Matrix, block_diag, jordan_block, jordan_form
from regconn.scalars import as_scalar, root_of_unity

from gen import unimodular


def J(*blocks):
    return block_diag(jordan_block(x, a) for x, a in blocks)


def test_filtration_of_mixed_blocks():
    X = J((0, 2), (0, 1), (1, 1))
    data = centralizer_data(X)
    assert data.quotient_dims(as_scalar(0)) == [1, 1]
    assert data.quotient_dims(as_scalar(1)) == [1]
    assert data.torus_dim == 3
    assert sorted(data.weyl_orbits) == [(0,), (1,), (2,)]


def test_weyl_groups_collect_equal_blocks():
    data = centralizer_data(J((0, 1), (0, 1), (0, 2)))
    assert (0, 1) in data.weyl_orbits


def brute_force_count(sizes, groups, l, tag):
    seen = set()
    for exps in product(range(l), repeat=len(sizes)):
        if tag == "sl" and sum(j * a for j, a in zip(exps, sizes)) % l:
            continue
        key = list(exps)
        for g in groups:
            vals = sorted(key[b] for b in g)
            for b, v in zip(g, vals):
                key[b] = v
        seen.add(tuple(key))
    return len(seen)


@pytest.mark.parametrize(
    "X",
    [J((0, 2)), J((0, 1), (0, 1)), J((0, 1), (0, 1), (0, 1)), J((0, 2), (1, 1)), J((root_of_unity(3), 1), (0, 1), (0, 1))],
)
@pytest.mark.parametrize("l", [1, 2, 3, 4])
@pytest.mark.parametrize("tag", ["gl", "sl"])
def test_torsion_counts_against_enumeration(X, l, tag):
    classes = torsion_elements(X, l, tag)
    data = centralizer_data(X)
    sizes = tuple(a for _, a in data.jordan.blocks)
    assert len(classes) == brute_force_count(sizes, data.weyl_orbits, l, tag)
    assert len(set(classes)) == len(classes)


def test_example_count():
    assert len(torsion_elements(J((0, 2)), 2, "sl")) == 2


def labelled(cls, datum):
    """Block-order free description: sorted (eigenvalue, size, j/l)."""
    return sorted((x.sort_key(), a, q) for (x, a), q in zip(datum.blocks, cls.fractions()))


@pytest.mark.parametrize("seed", range(15))
def test_classes_are_conjugation_invariant(seed):
    rng = random.Random(seed)
    X = rng.choice([J((0, 2), (1, 1)), J((0, 1), (0, 1), (Fraction(1, 2), 1)), J((root_of_unity(3), 2), (0, 1))])
    l = rng.randint(1, 4)
    P = unimodular(rng, 3, 5)
    Y = P @ X @ P.inverse()
    datum_x = JordanDatum.from_jordan_matrix(X)
    for cls in torsion_elements(X, l):
        d = torus_matrix(datum_x, cls)
        assert semisimple_class_to_torus(X, d, l) == cls
        data_y = centralizer_data(Y)
        moved = semisimple_class_to_torus(Y, P @ d @ P.inverse(), l, data=data_y)
        assert labelled(moved, data_y.jordan) == labelled(cls, datum_x)


def test_level_changes():
    datum = JordanDatum.from_blocks([(0, 1), (1, 1)])
    c = make_class(datum, (1, 0), 2)
    up = c.at_level(4)
    assert up.exponents == (2, 0) and up == c
    assert up.reduced().level == 2
    with pytest.raises(NotDivisible):
        c.at_level(3)


def test_order_is_inferred():
    X = J((0, 1), (1, 1))
    d = Matrix.diag([root_of_unity(3), 1])
    assert semisimple_class_to_torus(X, d).level == 3


def test_error_paths():
    X = J((0, 1), (1, 1))
    with pytest.raises(NotInCentralizer):
        semisimple_class_to_torus(X, Matrix([[0, 1], [1, 0]]), 2)
    with pytest.raises(NotTorsion):
        semisimple_class_to_torus(X, Matrix.diag([2, 1]), 2)
    big = J(*[(k, 1) for k in range(8)])
    with pytest.raises(EnumerationBoundExceeded):
        torsion_elements(big, 6)
