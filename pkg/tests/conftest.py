"""Shared random generators for property tests.

Everything is seeded explicitly inside each test; these helpers only build
structured random objects (unimodular matrices, semiorthonormal data).
"""

import random

from semiortho.bilinear_form import BilinearLattice
from semiortho.exact_linalg import IntMatrix


def random_son_gram(rng: random.Random, n: int, bound: int = 4) -> IntMatrix:
    """Upper unitriangular integer matrix: Gram of a semiorthonormal basis."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1
        for j in range(i + 1, n):
            rows[i][j] = rng.randint(-bound, bound)
    return IntMatrix.from_rows(rows)


def random_unimodular(rng: random.Random, n: int, steps: int = None) -> IntMatrix:
    """Random element of GL_n(Z) built from elementary row operations."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    if steps is None:
        steps = 3 * n
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
        if rng.random() < 0.3:
            rows[i] = [-a for a in rows[i]]
    return IntMatrix.from_rows(rows)


def random_unimodular_gram(rng: random.Random, n: int) -> IntMatrix:
    """Random Gram matrix with determinant +-1, not necessarily triangular."""
    s = random_unimodular(rng, n)
    core = random_son_gram(rng, n, bound=3)
    return s.transpose() * core * s


def random_son_lattice(rng: random.Random, n: int, bound: int = 4) -> BilinearLattice:
    return BilinearLattice(random_son_gram(rng, n, bound))
