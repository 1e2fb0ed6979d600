"""Free lattices with a unimodular bilinear form and their canonical operators.

Conventions: vectors are coordinate columns, the pairing is <v,w> = v^t X w
where X is the Gram matrix with X[i][j] = <e_i, e_j>.  The canonical operator
is the unique kappa with <v,w> = <w, kappa v>; in matrix form kappa = X^-1 X^t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_linalg import (
    IntMatrix,
    RatMatrix,
    ShapeError,
    UnimodularityError,
    det,
    inverse_unimodular,
)


@dataclass(frozen=True)
class BilinearLattice:
    """Free Z-module of finite rank with a unimodular Gram matrix.

    Rank 0 is legal (empty Gram, trivially unimodular); it is the base case
    for recursive constructions.
    """

    gram: IntMatrix

    def __post_init__(self):
        if not self.gram.is_square:
            raise ShapeError("Gram matrix must be square")
        d = det(self.gram)
        if d not in (1, -1):
            raise UnimodularityError(f"Gram determinant is {d}, expected +-1")

    @staticmethod
    def from_rows(rows) -> "BilinearLattice":
        return BilinearLattice(IntMatrix.from_rows(rows))

    @staticmethod
    def standard(rank: int) -> "BilinearLattice":
        return BilinearLattice(IntMatrix.identity(rank))

    @property
    def rank(self) -> int:
        return self.gram.rows


@dataclass(frozen=True)
class OperatorOnLattice:
    """Linear operator on a lattice, acting on coordinate columns."""

    matrix: RatMatrix
    ambient: BilinearLattice

    def __post_init__(self):
        if not self.matrix.is_square or self.matrix.rows != self.ambient.rank:
            raise ShapeError("operator dimension must equal lattice rank")

    @staticmethod
    def wrap(matrix, ambient: BilinearLattice) -> "OperatorOnLattice":
        if isinstance(matrix, IntMatrix):
            matrix = matrix.to_rat()
        return OperatorOnLattice(matrix, ambient)

    def is_integral(self) -> bool:
        return self.matrix.is_integral()


def pair(lattice: BilinearLattice, v: Sequence, w: Sequence):
    """<v,w> = v^t . gram . w"""
    if len(v) != lattice.rank or len(w) != lattice.rank:
        raise ShapeError("vector length must equal lattice rank")
    gw = lattice.gram.to_rat().apply([Fraction(x) for x in w])
    val = sum((Fraction(a) * b for a, b in zip(v, gw)), Fraction(0))
    return int(val) if val.denominator == 1 else val


def canonical_operator(lattice: BilinearLattice) -> OperatorOnLattice:
    """kappa = X^-1 X^t; integer because X is unimodular."""
    kappa = inverse_unimodular(lattice.gram) * lattice.gram.transpose()
    return OperatorOnLattice.wrap(kappa, lattice)


def _gram_q(lattice: BilinearLattice) -> RatMatrix:
    return lattice.gram.to_rat()


def left_dual(lattice: BilinearLattice, phi: OperatorOnLattice) -> OperatorOnLattice:
    """The operator with <left_dual(phi) v, w> = <v, phi w>."""
    x = _gram_q(lattice)
    xinv = inverse_unimodular(lattice.gram).to_rat()
    m = xinv.transpose() * phi.matrix.transpose() * x.transpose()
    return OperatorOnLattice(m, lattice)


def right_dual(lattice: BilinearLattice, phi: OperatorOnLattice) -> OperatorOnLattice:
    """The operator with <v, right_dual(phi) w> = <phi v, w>."""
    x = _gram_q(lattice)
    xinv = inverse_unimodular(lattice.gram).to_rat()
    m = xinv * phi.matrix.transpose() * x
    return OperatorOnLattice(m, lattice)


def is_reflexive(lattice: BilinearLattice, phi: OperatorOnLattice) -> bool:
    """True iff phi commutes with the canonical operator."""
    k = canonical_operator(lattice).matrix
    return (phi.matrix * k - k * phi.matrix).is_zero()


def is_selfdual(lattice: BilinearLattice, phi: OperatorOnLattice) -> bool:
    return (right_dual(lattice, phi).matrix - phi.matrix).is_zero()


def is_antiselfdual(lattice: BilinearLattice, phi: OperatorOnLattice) -> bool:
    return (right_dual(lattice, phi).matrix + phi.matrix).is_zero()


def is_isometry(lattice: BilinearLattice, phi: OperatorOnLattice) -> bool:
    """phi^t X phi = X, equivalently right_dual(phi) phi = id."""
    x = _gram_q(lattice)
    return (phi.matrix.transpose() * x * phi.matrix - x).is_zero()


def semiorthogonal_sum(l1: BilinearLattice, l2: BilinearLattice,
                       coupling: IntMatrix) -> BilinearLattice:
    """Block Gram [[g1, coupling], [0, g2]]; coupling[i][j] = <u_i, v_j>."""
    # an empty coupling cannot carry its column count; skip that check
    if coupling.rows != l1.rank or (coupling.rows > 0 and coupling.cols != l2.rank):
        raise ShapeError("coupling must be rank(l1) x rank(l2)")
    r1, r2 = l1.rank, l2.rank
    rows = []
    for i in range(r1):
        rows.append(l1.gram.row(i) + coupling.row(i))
    for i in range(r2):
        rows.append((0,) * r1 + l2.gram.row(i))
    return BilinearLattice(IntMatrix.from_rows(rows))


def sum_projections(l1: BilinearLattice, l2: BilinearLattice,
                    coupling: IntMatrix) -> tuple[RatMatrix, RatMatrix]:
    """Projections induced by a semiorthogonal sum.

    lam2: M1 -> M2 with <u1, v2> = <lam2 u1, v2>_2,
    rho1: M2 -> M1 with <u1, v2> = <u1, rho1 v2>_1.
    Both are integral since the component Grams are unimodular.
    """
    if l1.rank == 0 or l2.rank == 0:
        return RatMatrix.zero(l2.rank, l1.rank), RatMatrix.zero(l1.rank, l2.rank)
    c = coupling.to_rat()
    g1inv = inverse_unimodular(l1.gram).to_rat()
    g2inv = inverse_unimodular(l2.gram).to_rat()
    lam2 = g2inv.transpose() * c.transpose()
    rho1 = g1inv * c
    return lam2, rho1


def verify_canmatr(l1: BilinearLattice, l2: BilinearLattice,
                   coupling: IntMatrix) -> bool:
    """Check the block-matrix formula for kappa of a semiorthogonal sum.

    kappa_M = [[k1 - rho1 k2 lam2, -rho1 k2], [k2 lam2, k2]].
    """
    total = semiorthogonal_sum(l1, l2, coupling)
    kappa = canonical_operator(total).matrix
    k1 = canonical_operator(l1).matrix
    k2 = canonical_operator(l2).matrix
    r1, r2 = l1.rank, l2.rank
    if r1 == 0:
        return (kappa - k2).is_zero()
    if r2 == 0:
        return (kappa - k1).is_zero()
    lam2, rho1 = sum_projections(l1, l2, coupling)
    top_left = k1 - rho1 * k2 * lam2
    top_right = -(rho1 * k2)
    bot_left = k2 * lam2
    rows = []
    for i in range(r1):
        rows.append(tuple(top_left.entries[i]) + tuple(top_right.entries[i]))
    for i in range(r2):
        rows.append(tuple(bot_left.entries[i]) + tuple(k2.entries[i]))
    return (RatMatrix.from_rows(rows) - kappa).is_zero()


def extension_trace_check(w: BilinearLattice, ell: Sequence[int]):
    """Extend W by a unit vector e with projection ell and verify the trace law.

    Builds M = Ze (+) W with <e, w_j> = <ell, w_j>_W, returns
    (tr kappa_M, <kappa_M e, e>) and asserts
    tr kappa_M = tr kappa_W + 1 - <ell,ell> and <kappa_M e, e> = 1 - <ell,ell>.
    """
    if len(ell) != w.rank:
        raise ShapeError("ell must lie in W")
    coupling_row = w.gram.transpose().apply(list(ell))  # ell^t . gram_W
    coupling = IntMatrix.from_rows([coupling_row])
    unit = BilinearLattice.standard(1)
    total = semiorthogonal_sum(unit, w, coupling)
    kappa = canonical_operator(total).matrix
    tr_m = kappa.trace()
    e = [Fraction(1)] + [Fraction(0)] * w.rank
    kappa_e_e = pair(total, kappa.apply(e), e)
    ll = pair(w, ell, ell)
    tr_w = canonical_operator(w).matrix.trace()
    if tr_m != tr_w + 1 - ll or kappa_e_e != 1 - ll:
        raise AssertionError("extension trace law violated (implementation bug)")
    val_tr = int(tr_m)
    return val_tr, int(kappa_e_e)
