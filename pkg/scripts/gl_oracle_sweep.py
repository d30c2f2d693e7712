"""Compare gl_equivalent with the brute-force Laurent-polynomial solver on
random Jordan data presented in random bases."""
import argparse
import random
import sys
import time
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from regconn import gl_equivalent, jordan_block, root_of_unity  # noqa: E402
from regconn.linalg import block_diag, find_eigenvalues  # noqa: E402

from gen import unimodular  # noqa: E402
from oracles import brute_force_gl_equivalent, integer_spread  # noqa: E402

EIGEN = [0, Fraction(1, 3), Fraction(-1, 3), Fraction(1, 2), Fraction(-1, 2), 1, root_of_unity(3)]


def random_jordan_matrix(rng, n):
    blocks, left = [], n
    while left:
        a = rng.randint(1, left)
        blocks.append((rng.choice(EIGEN), a))
        left -= a
    J = block_diag(jordan_block(x, a) for x, a in blocks)
    P = unimodular(rng, n, 4)
    return P @ J @ P.inverse()


@dataclass
class SweepConfig:
    count: int = 200
    max_n: int = 3
    seed: int = 0


def parse_config(argv=None) -> SweepConfig:
    ap = argparse.ArgumentParser(description=__doc__)
    for f in fields(SweepConfig):
        ap.add_argument("--" + f.name.replace("_", "-"), type=int, default=f.default)
    return SweepConfig(**vars(ap.parse_args(argv)))


def main(argv=None):
    args = parse_config(argv)
    rng = random.Random(args.seed)
    start = time.time()
    agree = positive = 0
    for k in range(args.count):
        n = rng.randint(1, args.max_n)
        X = random_jordan_matrix(rng, n)
        # half the pairs compare X with itself so both outcomes are exercised
        Y = random_jordan_matrix(rng, n) if rng.random() < 0.5 else X
        w = 1 + integer_spread(X, Y, find_eigenvalues(X), find_eigenvalues(Y))
        ours = gl_equivalent(X, Y) is not None
        ref = brute_force_gl_equivalent(X, Y, w, seed=k)
        if ours != ref:
            print(f"disagreement at pair {k}:\n  X={X}\n  Y={Y}\n  ours={ours} oracle={ref}")
        agree += ours == ref
        positive += ours
    print(f"{agree}/{args.count} pairs agree ({positive} equivalent) in {time.time() - start:.1f}s")
    return 0 if agree == args.count else 1


if __name__ == "__main__":
    sys.exit(main())
