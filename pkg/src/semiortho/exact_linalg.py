"""Exact dense linear algebra over arbitrary-precision integers and rationals.

Integer matrices use Python ints (arbitrary precision), rational matrices use
fractions.Fraction, which keeps every entry reduced with positive denominator.
All matrices are immutable values; every operation returns a fresh matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union


class ShapeError(ValueError):
    """Matrix dimensions do not fit the requested operation."""


class UnimodularityError(ValueError):
    """Determinant is not +1 or -1 where unimodularity is required."""


def _freeze_rows(rows, cast):
    out = tuple(tuple(cast(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ShapeError("ragged rows")
    return out


@dataclass(frozen=True)
class IntMatrix:
    """Dense matrix with integer entries, row-major."""

    entries: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return IntMatrix(_freeze_rows(rows, int))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(tuple((0,) * cols for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        _check_same_shape(self, other)
        return IntMatrix(tuple(tuple(a + b for a, b in zip(r, s))
                               for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        _check_same_shape(self, other)
        return IntMatrix(tuple(tuple(a - b for a, b in zip(r, s))
                               for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-a for a in r) for r in self.entries))

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = other.transpose().entries
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                               for r in self.entries))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(c * a for a in r) for r in self.entries))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise ShapeError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def power(self, k: int) -> "IntMatrix":
        if not self.is_square:
            raise ShapeError("power of non-square matrix")
        if k < 0:
            raise ValueError("negative power")
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def trace(self) -> int:
        if not self.is_square:
            raise ShapeError("trace of non-square matrix")
        return sum(self.entries[i][i] for i in range(self.rows))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def to_rat(self) -> "RatMatrix":
        return RatMatrix(_freeze_rows(self.entries, Fraction))


@dataclass(frozen=True)
class RatMatrix:
    """Dense matrix with exact rational entries (Fraction keeps them reduced)."""

    entries: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_rows(rows) -> "RatMatrix":
        return RatMatrix(_freeze_rows(rows, Fraction))

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        return RatMatrix(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "RatMatrix":
        return RatMatrix(tuple((Fraction(0),) * cols for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        _check_same_shape(self, other)
        return RatMatrix(tuple(tuple(a + b for a, b in zip(r, s))
                               for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        _check_same_shape(self, other)
        return RatMatrix(tuple(tuple(a - b for a, b in zip(r, s))
                               for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(tuple(tuple(-a for a in r) for r in self.entries))

    def __mul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = other.transpose().entries
        return RatMatrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                               for r in self.entries))

    def scale(self, c) -> "RatMatrix":
        c = Fraction(c)
        return RatMatrix(tuple(tuple(c * a for a in r) for r in self.entries))

    def apply(self, v) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ShapeError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.entries)

    def power(self, k: int) -> "RatMatrix":
        if not self.is_square:
            raise ShapeError("power of non-square matrix")
        if k < 0:
            return self.inverse().power(-k)
        result = RatMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def trace(self) -> Fraction:
        if not self.is_square:
            raise ShapeError("trace of non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for r in self.entries for a in r)

    def to_int(self) -> IntMatrix:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return IntMatrix(tuple(tuple(int(a) for a in r) for r in self.entries))

    def det(self) -> Fraction:
        if not self.is_square:
            raise ShapeError("determinant of non-square matrix")
        n = self.rows
        m = [list(r) for r in self.entries]
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for r in range(col + 1, n):
                if m[r][col] != 0:
                    f = m[r][col] * inv
                    for c in range(col, n):
                        m[r][c] -= f * m[col][c]
        return det

    def inverse(self) -> "RatMatrix":
        if not self.is_square:
            raise ShapeError("inverse of non-square matrix")
        n = self.rows
        m = [list(r) + [Fraction(int(i == j)) for j in range(n)]
             for i, r in enumerate(self.entries)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot is None:
                raise ValueError("singular matrix")
            m[col], m[pivot] = m[pivot], m[col]
            inv = 1 / m[col][col]
            m[col] = [x * inv for x in m[col]]
            for r in range(n):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return RatMatrix(tuple(tuple(row[n:]) for row in m))


Matrix = Union[IntMatrix, RatMatrix]


def _check_same_shape(a, b):
    if a.rows != b.rows or a.cols != b.cols:
        raise ShapeError(f"shape mismatch: {a.rows}x{a.cols} vs {b.rows}x{b.cols}")


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients lowest degree first, trimmed."""

    coeffs: tuple[int, ...]

    @staticmethod
    def from_coeffs(coeffs: Iterable[int]) -> "IntPolynomial":
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return IntPolynomial(tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, m: RatMatrix) -> RatMatrix:
        """Substitute a square matrix for the variable (Cayley-Hamilton checks)."""
        acc = RatMatrix.zero(m.rows, m.cols)
        for c in reversed(self.coeffs):
            acc = acc * m + RatMatrix.identity(m.rows).scale(c)
        return acc


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    if not m.is_square:
        raise ShapeError("determinant of non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Exact integer inverse of a matrix with determinant +-1."""
    d = det(m)
    if d not in (1, -1):
        raise UnimodularityError(f"determinant is {d}, expected +-1")
    return m.to_rat().inverse().to_int()


def char_poly(m: IntMatrix) -> IntPolynomial:
    """Monic characteristic polynomial det(xI - m), exact coefficients."""
    coeffs = char_poly_rat(m.to_rat())
    assert all(c.denominator == 1 for c in coeffs)
    return IntPolynomial.from_coeffs(int(c) for c in coeffs)


def char_poly_rat(m: RatMatrix) -> tuple[Fraction, ...]:
    """Characteristic polynomial of a rational matrix via Faddeev-LeVerrier.

    Returns coefficients lowest degree first; leading coefficient is 1.
    """
    if not m.is_square:
        raise ShapeError("characteristic polynomial of non-square matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = RatMatrix.identity(n)
    for k in range(1, n + 1):
        mk = m * mk
        c = -mk.trace() / k
        coeffs[n - k] = c
        mk = mk + RatMatrix.identity(n).scale(c)
    return tuple(coeffs)


def nilpotency_index(m: RatMatrix) -> int | None:
    """Smallest k with m^k = 0, or None if m is not nilpotent."""
    if not m.is_square:
        raise ShapeError("nilpotency index of non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    # nilpotent iff char poly is x^n
    cp = char_poly_rat(m)
    if any(cp[i] != 0 for i in range(n)):
        return None
    power = RatMatrix.identity(n)
    for k in range(n + 1):
        if power.is_zero():
            return k
        power = power * m
    return n  # unreachable: Cayley-Hamilton forces m^n = 0

def rank_over_q(m: RatMatrix) -> int:
    """Rank by exact Gaussian elimination over the rationals."""
    rows = [list(r) for r in m.entries]
    rank = 0
    ncols = m.cols
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def kernel_basis(m: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel {v : m v = 0}, via reduced row echelon form."""
    nrows, ncols = m.rows, m.cols
    rows = [list(r) for r in m.entries]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(tuple(v))
    return basis
