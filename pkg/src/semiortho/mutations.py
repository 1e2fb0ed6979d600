"""Semiorthonormal collections, projections, mutations and the braid action.

A collection is an ordered list of lattice vectors whose Gram matrix is upper
triangular with units on the diagonal.  Left/right mutations of adjacent pairs
generate a braid group action; per-vector sign flips are kept as a separate
generator set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .bilinear_form import BilinearLattice, pair
from .exact_linalg import IntMatrix, RatMatrix, ShapeError, det


class InadmissibleError(ValueError):
    """Submodule with non-unimodular restricted form."""


class MembershipError(ValueError):
    """Vector is not in the required orthogonal complement."""


Direction = Literal["L", "R"]


@dataclass(frozen=True)
class SonCollection:
    """Ordered vectors in an ambient lattice, semiorthonormal by contract.

    The collection need not span the ambient lattice; the ambient form stays
    fixed while mutations rewrite the vectors.
    """

    ambient: BilinearLattice
    vectors: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_vectors(ambient: BilinearLattice, vectors) -> "SonCollection":
        vs = tuple(tuple(int(x) for x in v) for v in vectors)
        for v in vs:
            if len(v) != ambient.rank:
                raise ShapeError("vector length must equal ambient rank")
        return SonCollection(ambient, vs)

    @staticmethod
    def standard_basis(ambient: BilinearLattice) -> "SonCollection":
        n = ambient.rank
        return SonCollection(ambient, tuple(tuple(int(i == j) for j in range(n))
                                            for i in range(n)))

    def __len__(self) -> int:
        return len(self.vectors)

    def gram(self) -> IntMatrix:
        """Gram matrix of the collection under the ambient form."""
        return IntMatrix.from_rows(
            [[pair(self.ambient, v, w) for w in self.vectors] for v in self.vectors])

    def flip_sign(self, i: int) -> "SonCollection":
        vs = list(self.vectors)
        vs[i] = tuple(-x for x in vs[i])
        return SonCollection(self.ambient, tuple(vs))


def is_semiorthonormal(c: SonCollection) -> bool:
    g = c.gram()
    n = len(c)
    for i in range(n):
        if g[i, i] != 1:
            return False
        for j in range(i):
            if g[i, j] != 0:
                return False
    return True


@dataclass(frozen=True)
class AdmissibleSubmodule:
    """Submodule spanned by given basis vectors, with unimodular restricted form."""

    ambient: BilinearLattice
    basis: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_basis(ambient: BilinearLattice, basis) -> "AdmissibleSubmodule":
        bs = tuple(tuple(int(x) for x in v) for v in basis)
        u = AdmissibleSubmodule(ambient, bs)
        if not is_admissible(ambient, bs):
            raise InadmissibleError("restricted Gram is not unimodular")
        return u

    def gram_restricted(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [[pair(self.ambient, v, w) for w in self.basis] for v in self.basis])

    def basis_matrix(self) -> IntMatrix:
        """Columns are the basis vectors in ambient coordinates."""
        return IntMatrix.from_rows(self.basis).transpose()


def is_admissible(ambient: BilinearLattice, basis) -> bool:
    g = IntMatrix.from_rows(
        [[pair(ambient, v, w) for w in basis] for v in basis])
    return det(g) in (1, -1)


def _solve_in_submodule(u: AdmissibleSubmodule, rhs: RatMatrix) -> tuple[Fraction, ...]:
    # coordinates x with G_U x = rhs (column), then back to ambient coordinates
    g = u.gram_restricted().to_rat()
    x = g.inverse() * rhs
    b = u.basis_matrix().to_rat()
    return (b * x).transpose().entries[0]


def right_projection(u: AdmissibleSubmodule, v: Sequence[int]) -> tuple[int, ...]:
    """rho_U(v): the unique vector in U with <u, v> = <u, rho_U v> for u in U."""
    x = u.ambient.gram.to_rat()
    b = u.basis_matrix().to_rat()
    col = RatMatrix.from_rows([[c] for c in (b.transpose() * x).apply([Fraction(t) for t in v])])
    return tuple(int(c) for c in _solve_in_submodule(u, col))


def left_projection(u: AdmissibleSubmodule, v: Sequence[int]) -> tuple[int, ...]:
    """lambda_U(v): the unique vector in U with <v, u> = <lambda_U v, u> for u in U."""
    x = u.ambient.gram.to_rat()
    b = u.basis_matrix().to_rat()
    rhs = (b.transpose() * x.transpose()).apply([Fraction(t) for t in v])
    # lambda coordinates solve x^t G_U = v^t X B, i.e. G_U^t x = B^t X^t v
    g = u.gram_restricted().to_rat().transpose()
    coords = g.inverse() * RatMatrix.from_rows([[c] for c in rhs])
    amb = (u.basis_matrix().to_rat() * coords).transpose().entries[0]
    return tuple(int(c) for c in amb)


def _in_left_orthogonal(u: AdmissibleSubmodule, v) -> bool:
    # ^perp U = {w : <w, u> = 0 for all u in U}
    return all(pair(u.ambient, v, b) == 0 for b in u.basis)


def _in_right_orthogonal(u: AdmissibleSubmodule, v) -> bool:
    # U^perp = {w : <u, w> = 0 for all u in U}
    return all(pair(u.ambient, b, v) == 0 for b in u.basis)


def mutation_through_submodule(u: AdmissibleSubmodule, v: Sequence[int],
                               direction: Direction) -> tuple[int, ...]:
    """Left mutation maps the left orthogonal of U onto the right one; right
    mutation is its inverse.  Both are isometries."""
    v = tuple(int(x) for x in v)
    if not u.basis:
        return v
    if direction == "L":
        if not _in_left_orthogonal(u, v):
            raise MembershipError("vector is not in the left orthogonal of U")
        p = right_projection(u, v)
    elif direction == "R":
        if not _in_right_orthogonal(u, v):
            raise MembershipError("vector is not in the right orthogonal of U")
        p = left_projection(u, v)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return tuple(a - b for a, b in zip(v, p))


def mutate_pair(c: SonCollection, nu: int, direction: Direction) -> SonCollection:
    """Replace the pair (e_{nu-1}, e_nu) by its left or right mutation.

    L(a,b) = (b - <a,b> a, a) and R(a,b) = (b, a - <a,b> b).
    """
    if not 1 <= nu <= len(c) - 1:
        raise IndexError(f"mutation index {nu} out of range 1..{len(c) - 1}")
    a = c.vectors[nu - 1]
    b = c.vectors[nu]
    if pair(c.ambient, a, a) != 1 or pair(c.ambient, b, b) != 1 \
            or pair(c.ambient, b, a) != 0:
        # mutations are defined on semiorthonormal pairs only
        raise ValueError("pair is not semiorthonormal")
    ab = pair(c.ambient, a, b)
    if direction == "L":
        new = (tuple(x - ab * y for x, y in zip(b, a)), a)
    elif direction == "R":
        new = (b, tuple(x - ab * y for x, y in zip(a, b)))
    else:
        raise ValueError(f"unknown direction {direction!r}")
    vs = list(c.vectors)
    vs[nu - 1], vs[nu] = new
    return SonCollection(c.ambient, tuple(vs))


@dataclass(frozen=True)
class BraidWord:
    """Word in the generators L_nu / R_nu, applied left to right."""

    letters: tuple[tuple[int, Direction], ...]

    @staticmethod
    def parse(text: str) -> "BraidWord":
        letters = []
        for token in text.split():
            d = token[0].upper()
            if d not in ("L", "R") or not token[1:].isdigit():
                raise ValueError(f"bad braid letter {token!r}")
            nu = int(token[1:])
            if nu < 1:
                raise ValueError(f"braid index must be >= 1 in {token!r}")
            letters.append((nu, d))
        return BraidWord(tuple(letters))

    def __str__(self) -> str:
        return " ".join(f"{d}{nu}" for nu, d in self.letters)


def apply_braid(c: SonCollection, word: BraidWord) -> SonCollection:
    for nu, d in word.letters:
        c = mutate_pair(c, nu, d)
    return c


def collection_height(g: IntMatrix) -> int:
    """Height of a collection = max |Gram entry|."""
    return max((abs(x) for row in g.entries for x in row), default=0)


def _sign_canonical(g: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    # lexicographically least Gram matrix over all per-vector sign choices;
    # flipping vector i negates row i and column i
    n = len(g)
    best = None
    for mask in range(1 << n):
        s = [1 - 2 * ((mask >> i) & 1) for i in range(n)]
        cand = tuple(tuple(s[i] * s[j] * g[i][j] for j in range(n)) for i in range(n))
        if best is None or cand < best:
            best = cand
    return best


MARKOV_CANONICAL_GRAM = ((1, 3, 3), (0, 1, 3), (0, 0, 1))


@dataclass(frozen=True)
class OrbitReport:
    orbit_size: int
    truncated: bool
    canonical_gram: tuple[tuple[int, ...], ...]
    generators_used: tuple[str, ...]
    reached_markov_canonical: bool


def orbit_search(c: SonCollection, height_bound: int, max_nodes: int) -> OrbitReport:
    """BFS over mutations modulo the sign action on basis vectors.

    States are Gram matrices of the collection, canonicalized to the lex-least
    representative over sign flips.  States whose height exceeds the bound are
    not expanded; hitting either bound flags the report as truncated.
    """
    if height_bound < 0 or max_nodes <= 0:
        raise ValueError("bounds must be positive")
    if not is_semiorthonormal(c):
        raise ValueError("collection is not semiorthonormal")
    n = len(c)
    target = _sign_canonical(MARKOV_CANONICAL_GRAM) if n == 3 else None
    start = _sign_canonical(c.gram().entries)
    seen = {start}
    queue = deque([start])
    truncated = False
    reached = start == target
    generators = [f"{d}{nu}" for nu in range(1, n) for d in ("L", "R")]
    used: set[str] = set()
    while queue:
        g = queue.popleft()
        if max(abs(x) for row in g for x in row) > height_bound:
            truncated = True
            continue
        for nu in range(1, n):
            for d in ("L", "R"):
                ng = _mutate_gram(g, nu, d)
                cang = _sign_canonical(ng)
                if cang in seen:
                    continue
                if len(seen) >= max_nodes:
                    truncated = True
                    continue
                seen.add(cang)
                used.add(f"{d}{nu}")
                if cang == target:
                    reached = True
                queue.append(cang)
    canonical = min(seen)
    return OrbitReport(orbit_size=len(seen), truncated=truncated,
                       canonical_gram=canonical,
                       generators_used=tuple(sorted(used)),
                       reached_markov_canonical=bool(reached))


def _mutate_gram(g: tuple[tuple[int, ...], ...], nu: int,
                 direction: Direction) -> tuple[tuple[int, ...], ...]:
    # Gram effect of mutating the pair (e_{nu-1}, e_nu): base change on rows
    # and columns.  L: (a,b) -> (b - <a,b> a, a); R: (a,b) -> (b, a - <a,b> b).
    n = len(g)
    ab = g[nu - 1][nu]
    if direction == "L":
        # f_{nu-1} = e_nu - ab * e_{nu-1}, f_nu = e_{nu-1}
        change = {nu - 1: {nu: 1, nu - 1: -ab}, nu: {nu - 1: 1}}
    else:
        # f_{nu-1} = e_nu, f_nu = e_{nu-1} - ab * e_nu
        change = {nu - 1: {nu: 1}, nu: {nu - 1: 1, nu: -ab}}

    def entry(i, j):
        ci = change.get(i, {i: 1})
        cj = change.get(j, {j: 1})
        return sum(a * b * g[p][q] for p, a in ci.items() for q, b in cj.items())

    return tuple(tuple(entry(i, j) for j in range(n)) for i in range(n))
