"""Shared generators and brute-force oracles for the test suite."""

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from qhom.linalg import GaussianRational, Matrix

small_ints = st.integers(min_value=-3, max_value=3)
small_fracs = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=3))
gauss = st.builds(GaussianRational, small_fracs, small_fracs)


def exact_matrices(rows, cols, elements=gauss):
    return st.lists(st.lists(elements, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(Matrix.exact)


@st.composite
def square_matrices(draw, max_dim=4):
    n = draw(st.integers(min_value=1, max_value=max_dim))
    return draw(exact_matrices(n, n))


def random_exact(rng: random.Random, rows: int, cols: int, bound: int = 3) -> Matrix:
    def entry():
        return GaussianRational(
            Fraction(rng.randint(-bound, bound), rng.randint(1, 3)),
            Fraction(rng.randint(-bound, bound), rng.randint(1, 3)),
        )

    return Matrix.exact([[entry() for _ in range(cols)] for _ in range(rows)])


def naive_kron(a: Matrix, b: Matrix) -> Matrix:
    """Definition [a_ij * B] written out entry by entry."""
    m, n = a.shape
    p, q = b.shape
    rows = [[a[i // p, j // q] * b[i % p, j % q] for j in range(n * q)] for i in range(m * p)]
    return Matrix.exact(rows)


def naive_matmul(a: Matrix, b: Matrix) -> Matrix:
    rows = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            acc = GaussianRational(0)
            for t in range(a.cols):
                acc = acc + a[i, t] * b[t, j]
            row.append(acc)
        rows.append(row)
    return Matrix.exact(rows)


def brute_force_homs(a, b):
    """All homomorphisms by enumerating every map."""
    out = []
    for values in itertools.product(b.universe, repeat=len(a.universe)):
        f = dict(zip(a.universe, values))
        if all(
            tuple(f[v] for v in t) in b.relations[name]
            for name in a.signature.names
            for t in a.relations[name]
        ):
            out.append(f)
    return out
