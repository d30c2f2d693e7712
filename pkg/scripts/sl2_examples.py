"""Walk through the SL_2 examples: cover parity, the two relatives of J(0,2),
and the obstruction for diag(1/2, -1/2)."""
from fractions import Fraction

from regconn import (
    Connection,
    Matrix,
    format_matrix,
    jordan_block,
    relatives_list,
    sl_classify_rel_to,
    sl_gauge_equivalent,
    standardize,
    zero_standardize,
)
from regconn.textio import parse_matrix


def main():
    print("standard forms of A_n = [[n/2, z^n], [0, -n/2]] dlog z over SL_2")
    for n in range(1, 7):
        A = Connection(parse_matrix(f"[[{n}/2, z^{n}], [0, -{n}/2]]"), "sl")
        st = standardize(A, "sl")
        print(f"  n={n}: m={st.m}  X={format_matrix(st.X)}  cocharacter={st.cochar.exponents}")

    print("\nrelatives of J(0,2) at level 2")
    rels = relatives_list(jordan_block(0, 2), 2)
    for r in rels:
        print(f"  class j={r.cls.exponents}: {format_matrix(r.connection.coeff)} dlog z")
    a, b = (r.connection for r in rels)
    print(f"  gauge equivalent: {sl_gauge_equivalent(a, b)}")

    B = Connection.constant(Matrix.diag([Fraction(1, 2), Fraction(-1, 2)]), "sl")
    zs = zero_standardize(B.constant_matrix(), "sl")
    res = sl_classify_rel_to(Matrix.zero(2), B)
    print("\ndiag(1/2, -1/2) dlog z")
    print(f"  zero standard form after a cover of degree {zs.cover}: {format_matrix(zs.X_prime)}")
    print(f"  class relative to 0: level {res.cls.level}, exponents {res.cls.exponents}")
    print(f"  equivalent to 0 over k((z)): {sl_gauge_equivalent(B, Connection.constant(Matrix.zero(2), 'sl'))}")


if __name__ == "__main__":
    main()
