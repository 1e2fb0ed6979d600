"""Classification of unimodular forms via the Jordan structure of kappa.

Splitting is carried out over the rationals only: when the characteristic
polynomial of the canonical operator has irrational roots the verdict reports
the factorization instead of decomposing.  Jordan types are computed from
kernel-rank sequences, never from eigenvector chains.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .bilinear_form import BilinearLattice, OperatorOnLattice, canonical_operator, right_dual
from .exact_linalg import (
    RatMatrix,
    ShapeError,
    char_poly_rat,
    kernel_basis,
    rank_over_q,
)


class IrrationalSpectrumError(ValueError):
    """Canonical operator has irrational eigenvalues; no rational splitting."""


@dataclass(frozen=True)
class Type1:
    n: int
    epsilon: int


@dataclass(frozen=True)
class Type2:
    k: int
    mu: Fraction


@dataclass(frozen=True)
class DecomposableRational:
    summands: tuple


@dataclass(frozen=True)
class IrrationalSpectrum:
    """Rational roots found so far plus the irreducible-over-our-means remainder."""

    rational_roots: tuple[tuple[Fraction, int], ...]
    remainder: tuple[Fraction, ...]  # monic factor with no rational roots, low degree first


Verdict = Union[Type1, Type2, DecomposableRational, IrrationalSpectrum]


@dataclass(frozen=True)
class FormTypeReport:
    char_poly_of_kappa: tuple[Fraction, ...]
    rational_eigenvalues: tuple[tuple[Fraction, int], ...]
    verdict: Verdict


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deflate(coeffs: Sequence[Fraction], root: Fraction) -> tuple[Fraction, ...]:
    # synthetic division by (x - root); remainder must be zero
    out = [Fraction(0)] * (len(coeffs) - 1)
    carry = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[i] + carry * root
        out[i - 1] = carry
    assert coeffs[0] + carry * root == 0
    return tuple(out)


def rational_roots(coeffs: Sequence[Fraction]) -> tuple[list[tuple[Fraction, int]], tuple[Fraction, ...]]:
    """All rational roots with multiplicities, plus the rootless remainder factor."""
    cur = tuple(Fraction(c) for c in coeffs)
    roots: Counter = Counter()
    while len(cur) > 1:
        # strip zero roots first
        if cur[0] == 0:
            roots[Fraction(0)] += 1
            cur = cur[1:]
            continue
        scale = 1
        for c in cur:
            scale = scale * c.denominator // _gcd(scale, c.denominator)
        ints = [int(c * scale) for c in cur]
        found = None
        for p in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if _poly_eval(cur, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots[found] += 1
        cur = _poly_deflate(cur, found)
    return sorted(roots.items()), cur


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _jordan_partition(m: RatMatrix, mu: Fraction, mult: int) -> Counter:
    """Multiset of Jordan chain lengths for eigenvalue mu, from kernel ranks."""
    n = m.rows
    shifted = m - RatMatrix.identity(n).scale(mu)
    kdims = [0]
    power = RatMatrix.identity(n)
    for _ in range(mult):
        power = power * shifted
        kdims.append(n - rank_over_q(power))
    # chains of length >= j: kdims[j] - kdims[j-1]
    at_least = [kdims[j] - kdims[j - 1] for j in range(1, mult + 1)]
    partition: Counter = Counter()
    for m_len in range(1, mult + 1):
        cnt = at_least[m_len - 1] - (at_least[m_len] if m_len < mult else 0)
        if cnt:
            partition[m_len] = cnt
    return partition


def _pick_mu(mu: Fraction) -> Fraction:
    # canonical representative of the pair {mu, 1/mu}
    return mu if abs(mu.numerator) >= abs(mu.denominator) else 1 / mu


def _summands(kappa: RatMatrix, roots: list[tuple[Fraction, int]]) -> list[Verdict]:
    out: list[Verdict] = []
    seen_pairs = set()
    for mu, mult in roots:
        if mu in (1, -1):
            eps = int(mu)
            partition = _jordan_partition(kappa, mu, mult)
            for length in sorted(partition, reverse=True):
                cnt = partition[length]
                if (-1) ** (length - 1) == eps:
                    out.extend(Type1(length - 1, eps) for _ in range(cnt))
                else:
                    # chains of this parity only pair up into type-2 blocks
                    if cnt % 2:
                        raise ValueError("odd chain count with mismatched sign; "
                                         "form cannot be nondegenerate")
                    out.extend(Type2(length, Fraction(eps)) for _ in range(cnt // 2))
        else:
            rep = _pick_mu(mu)
            if rep in seen_pairs:
                continue
            seen_pairs.add(rep)
            partition = _jordan_partition(kappa, rep, mult)
            partition_inv = _jordan_partition(kappa, 1 / rep, mult)
            if partition != partition_inv:
                raise ValueError("paired root spaces have different cycle types")
            for length in sorted(partition, reverse=True):
                out.extend(Type2(length, rep) for _ in range(partition[length]))
    return out


def kappa_of_gram(gram: RatMatrix) -> RatMatrix:
    if not gram.is_square:
        raise ShapeError("Gram matrix must be square")
    if gram.det() == 0:
        raise ValueError("degenerate form")
    return gram.inverse() * gram.transpose()


def detect_type_gram(gram: RatMatrix) -> FormTypeReport:
    kappa = kappa_of_gram(gram)
    cp = char_poly_rat(kappa)
    roots, remainder = rational_roots(cp)
    if len(remainder) > 1:
        verdict: Verdict = IrrationalSpectrum(tuple(roots), remainder)
        return FormTypeReport(cp, tuple(roots), verdict)
    summands = _summands(kappa, roots)
    verdict = summands[0] if len(summands) == 1 else DecomposableRational(tuple(summands))
    return FormTypeReport(cp, tuple(roots), verdict)


def detect_type(lattice: BilinearLattice) -> FormTypeReport:
    return detect_type_gram(lattice.gram.to_rat())


@dataclass(frozen=True)
class SplitSummand:
    """One biorthogonal summand of the root decomposition."""

    eigenvalues: tuple[Fraction, ...]  # (mu,) for mu = +-1, else (mu, 1/mu)
    basis: tuple[tuple[Fraction, ...], ...]  # column vectors spanning the summand
    restricted_gram: RatMatrix


def biorthogonal_split(gram: RatMatrix) -> list[SplitSummand]:
    """Root-space decomposition of kappa over Q, with restricted forms.

    Cross-pairings between different summands are verified to vanish in both
    orders; a failure means an implementation bug, not bad input.
    """
    kappa = kappa_of_gram(gram)
    cp = char_poly_rat(kappa)
    roots, remainder = rational_roots(cp)
    if len(remainder) > 1:
        raise IrrationalSpectrumError(
            f"irrational eigenvalues remain (degree {len(remainder) - 1} factor)")
    n = gram.rows
    groups: list[tuple[tuple[Fraction, ...], list[tuple[Fraction, ...]]]] = []
    seen = set()
    mults = dict(roots)
    for mu, mult in roots:
        if mu in seen:
            continue
        if mu in (1, -1):
            seen.add(mu)
            shifted = (kappa - RatMatrix.identity(n).scale(mu)).power(mult)
            groups.append(((mu,), kernel_basis(shifted)))
        else:
            inv = 1 / mu
            seen.update((mu, inv))
            b1 = kernel_basis((kappa - RatMatrix.identity(n).scale(mu)).power(mult))
            b2 = kernel_basis((kappa - RatMatrix.identity(n).scale(inv)).power(mults[inv]))
            groups.append(((mu, inv), b1 + b2))
    out = []
    for evs, basis in groups:
        b = RatMatrix.from_rows(basis).transpose()
        restricted = b.transpose() * gram * b
        out.append(SplitSummand(evs, tuple(basis), restricted))
    # biorthogonality across groups, both orders
    for i, s1 in enumerate(out):
        for j, s2 in enumerate(out):
            if i == j:
                continue
            for v in s1.basis:
                for w in s2.basis:
                    gw = gram.apply(w)
                    if sum((x * y for x, y in zip(v, gw)), Fraction(0)) != 0:
                        raise AssertionError("root summands fail biorthogonality")
    return out


def standard_type2_gram(k: int, mu) -> RatMatrix:
    """The 2k x 2k anti-triangular standard Gram matrix of a type-2 form.

    Upper-right block: mu on the antidiagonal, 1 just right of it; lower-left
    block: antidiagonal of 1s.
    """
    mu = Fraction(mu)
    if k < 1:
        raise ValueError("k must be >= 1")
    if mu == 0 or mu == Fraction((-1) ** (k + 1)):
        raise ValueError(f"mu must differ from 0 and (-1)^(k+1) = {(-1) ** (k + 1)}")
    size = 2 * k
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(k):
        for j in range(k):
            if i + j == k - 1:
                rows[i][k + j] = mu
                rows[k + i][j] = Fraction(1)
            if i + j == k and i >= 1:
                rows[i][k + j] = Fraction(1)
    return RatMatrix.from_rows(rows)


def standard_type1_gram(n: int) -> RatMatrix:
    """The (n+1) x (n+1) standard Gram matrix of a type-1 form.

    Zero above the antidiagonal; on and below it the entries repeat the right
    column with alternating signs: G[i][j] = (-1)^j eps c_{i+j-n} with
    c_0 = c_1 = 1 and c_m = 0 otherwise.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    eps = (-1) ** n
    c = [0] * (n + 2)
    c[0] = 1
    c[1] = 1
    rows = []
    for i in range(n + 1):
        row = []
        for j in range(n + 1):
            if i + j < n:
                row.append(Fraction(0))
            else:
                row.append(Fraction((-1) ** j * eps * c[i + j - n]))
        rows.append(row)
    return RatMatrix.from_rows(rows)


def zeta_from_kappa(kappa: RatMatrix, n: int) -> RatMatrix:
    """zeta = (eps kappa - E)(eps kappa + E)^-1 with eps = (-1)^n."""
    eps = (-1) ** n
    e = RatMatrix.identity(kappa.rows)
    num = kappa.scale(eps) - e
    den = kappa.scale(eps) + e
    if den.det() == 0:
        raise ValueError("eps*kappa + E is singular: not a type-1 canonical operator")
    return num * den.inverse()


def kappa_from_zeta(zeta: RatMatrix, n: int) -> RatMatrix:
    """Inverse of zeta_from_kappa: kappa = eps (1+zeta)(1-zeta)^-1."""
    eps = (-1) ** n
    e = RatMatrix.identity(zeta.rows)
    return (e + zeta).scale(eps) * (e - zeta).inverse()


@dataclass(frozen=True)
class ZetaSeries:
    """Element of Q[z]/z^(n+1), the canonical algebra of a type-1 form."""

    n: int
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def from_coeffs(n: int, coeffs) -> "ZetaSeries":
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > n + 1:
            raise ValueError("too many coefficients")
        cs += [Fraction(0)] * (n + 1 - len(cs))
        return ZetaSeries(n, tuple(cs))

    @staticmethod
    def one(n: int) -> "ZetaSeries":
        return ZetaSeries.from_coeffs(n, [1])

    def __mul__(self, other: "ZetaSeries") -> "ZetaSeries":
        if self.n != other.n:
            raise ShapeError("mismatched truncation orders")
        out = [Fraction(0)] * (self.n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > self.n:
                    break
                out[i + j] += a * b
        return ZetaSeries(self.n, tuple(out))

    def involution(self) -> "ZetaSeries":
        """The duality f(z) -> f(-z)."""
        return ZetaSeries(self.n, tuple(c if i % 2 == 0 else -c
                                        for i, c in enumerate(self.coeffs)))

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def matrix_in(self, zeta: RatMatrix) -> RatMatrix:
        acc = RatMatrix.zero(zeta.rows, zeta.cols)
        for c in reversed(self.coeffs):
            acc = acc * zeta + RatMatrix.identity(zeta.rows).scale(c)
        return acc


def odd_coefficient_count(n: int) -> int:
    """Number of odd powers z, z^3, ... available below degree n+1."""
    return (n + 1) // 2


def type1_isometry_from_odd(odd: Sequence, sign: int, n: int) -> ZetaSeries:
    """The unique isometry f with f(0) = sign and the given odd coefficients.

    Even coefficients are solved degree by degree from f(-z) f(z) = 1; the
    parametrization is exactly the two-component description of the isometry
    group of a type-1 form.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    k = odd_coefficient_count(n)
    odd = [Fraction(c) for c in odd]
    if len(odd) != k:
        raise ValueError(f"expected {k} odd coefficients for n = {n}")
    a = [Fraction(0)] * (n + 1)
    a[0] = Fraction(sign)
    for i, c in enumerate(odd):
        a[2 * i + 1] = c
    for m in range(1, n // 2 + 1):
        d = 2 * m
        # coefficient of z^d in f(-z) f(z) is sum (-1)^i a_i a_{d-i}; the
        # a_d terms contribute 2 a_0 a_d, everything else is already known
        rest = sum((-1) ** i * a[i] * a[d - i] for i in range(1, d))
        a[d] = -rest / (2 * a[0])
    return ZetaSeries(n, tuple(a))


def is_type1_isometry(f: ZetaSeries) -> bool:
    return (f.involution() * f).is_one()


def isometry_orbit_invariant(lattice: BilinearLattice,
                             a: OperatorOnLattice) -> OperatorOnLattice:
    """A* A; equal invariants characterize one orbit of the isometry group."""
    kappa = canonical_operator(lattice).matrix
    if not (a.matrix * kappa - kappa * a.matrix).is_zero():
        raise ValueError("operator is not in the canonical algebra")
    if a.matrix.det() == 0:
        raise ValueError("operator must be invertible over Q")
    return OperatorOnLattice(right_dual(lattice, a).matrix * a.matrix, lattice)
