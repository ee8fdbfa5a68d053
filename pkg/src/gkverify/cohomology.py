"""Lie algebra cohomology of the antiholomorphic halves and the pages of
the associated double complex.

Complexes are finite: cochains with trivial coefficients over a
bracket-closed subspace, assembled degree by degree over mask-ordered
monomial bases.  The double page tensors the cochain complex of the
conjugate plus half with the antiholomorphic torus directions of the
minus half; its second page and the total cohomology of the conjugated
Lagrangian must agree, which is the finite shadow of the collapse
theorem.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .exactfield import Matrix, Scalar, Subspace, rank
from .lagrangian import Double, GKPair

Vector = tuple


class CEComplex:
    """Cochain complex of a bracket-closed subspace with exact differentials."""

    def __init__(self, sub: Subspace, bracket, d: int):
        self.sub = sub
        self.scalar_d = d
        m = sub.dim
        basis = list(sub.vectors())
        # structure coefficients in the canonical basis of the subspace
        struct = {}
        for i in range(m):
            for j in range(i + 1, m):
                image = bracket(basis[i], basis[j])
                if not sub.contains_vector(image):
                    raise ValueError("subspace is not closed under the bracket")
                coords = sub.coordinates(image)
                if any(coords):
                    struct[(i, j)] = coords
        self.dim = m
        self._struct = struct
        self.differentials = [self._matrix(k) for k in range(m)]
        for k in range(m - 1):
            product = self.differentials[k + 1] * self.differentials[k]
            if any(any(c for c in row) for row in product.data):
                raise ValueError("differential does not square to zero")

    def _matrix(self, k: int) -> Matrix:
        """d_k as a matrix from k-cochains to (k+1)-cochains.

        Entry at (N, M): sum over position pairs i < j in N of
        (-1)^(i+j) times the coefficient of the M-monomial in the
        contraction of [s_i, s_j] against the remaining slots.
        """
        m = self.dim
        cols = {mono: c for c, mono in enumerate(combinations(range(m), k))}
        zero = Scalar.zero(self.scalar_d)
        out = []
        for target in combinations(range(m), k + 1):
            row = [zero] * len(cols)
            for i in range(k + 1):
                for j in range(i + 1, k + 1):
                    coords = self._struct.get((target[i], target[j]))
                    if coords is None:
                        continue
                    rest = target[:i] + target[i + 1:j] + target[j + 1:]
                    rest_set = set(rest)
                    for t, coeff in enumerate(coords):
                        if not coeff or t in rest_set:
                            continue
                        source = tuple(sorted(rest + (t,)))
                        sign = (-1) ** (i + j)
                        sign *= (-1) ** sum(1 for x in rest if x < t)
                        c = cols[source]
                        row[c] = row[c] + sign * coeff
            out.append(row)
        return Matrix(out)

    def betti(self) -> tuple:
        ranks = [rank(mat) for mat in self.differentials]
        dims = []
        for k in range(self.dim + 1):
            above = ranks[k] if k < self.dim else 0
            below = ranks[k - 1] if k else 0
            dims.append(comb(self.dim, k) - above - below)
        return tuple(dims)


def _bracket_of(algebra, ambient: int):
    """Bracket callable for a subspace of the algebra or of its double."""
    if ambient == algebra.dim:
        return algebra.bracket
    if ambient == 2 * algebra.dim:
        return Double(algebra).bracket
    raise ValueError("subspace does not live in the algebra or its double")


def ce_cohomology(algebra, sub: Subspace) -> tuple:
    """Betti numbers of the trivial-coefficient cochain complex of sub."""
    bracket = _bracket_of(algebra, sub.ambient)
    return CEComplex(sub, bracket, algebra.d).betti()


@dataclass(frozen=True)
class DoublePage:
    e1_dims: dict
    d1: dict
    e2_dims: dict
    rank_half: int


def e1_page(pair: GKPair, side: str = "plus") -> DoublePage:
    """First page: cochains of the conjugate half tensored with the
    antiholomorphic torus directions of the other half; the differential
    acts on the first factor only."""
    algebra = pair.algebra
    conj = algebra.conjugation
    if side == "plus":
        half, other = pair.l_plus, pair.l_minus
    elif side == "minus":
        half, other = pair.l_minus, pair.l_plus
    else:
        raise ValueError("side must be 'plus' or 'minus'")
    lbar = conj.apply_subspace(half.subspace)
    t01_other = conj.apply_subspace(other.t10)
    complex_ = CEComplex(lbar, algebra.bracket, algebra.d)
    n = lbar.dim
    r = t01_other.dim
    e1_dims = {}
    d1 = {}
    for p in range(n + 1):
        for q in range(r + 1):
            e1_dims[(p, q)] = comb(n, p) * comb(r, q)
            if p < n:
                d1[(p, q)] = complex_.differentials[p]
    return DoublePage(e1_dims, d1, {}, rank_half=r)


def e2_page(page: DoublePage) -> DoublePage:
    """Cohomology of the first page in the p-direction."""
    e2 = {}
    ranks = {key: rank(mat) for key, mat in page.d1.items()}
    for (p, q), dim in page.e1_dims.items():
        tensor = comb(page.rank_half, q)
        out_rank = ranks.get((p, q), 0) * tensor
        in_rank = ranks.get((p - 1, q), 0) * tensor
        e2[(p, q)] = dim - out_rank - in_rank
    return DoublePage(page.e1_dims, page.d1, e2, page.rank_half)


def total_cohomology(pair: GKPair) -> tuple:
    """Betti numbers of the conjugated plus Lagrangian inside the double."""
    algebra = pair.algebra
    double = Double(algebra)
    lbar = double.conj_subspace(pair.L_plus.subspace)
    return ce_cohomology(algebra, lbar)


def kunneth(left: Sequence[int], right: Sequence[int]) -> tuple:
    out = [0] * (len(left) + len(right) - 1)
    for i, a in enumerate(left):
        if not a:
            continue
        for j, b in enumerate(right):
            out[i + j] += a * b
    return tuple(out)


@dataclass(frozen=True)
class PicardReport:
    rank_half: int
    h1_plus: int
    tangent_dim: int

    @property
    def consistent(self) -> bool:
        return self.h1_plus == self.rank_half and \
            self.tangent_dim == 2 * self.rank_half


def picard_report(pair: GKPair) -> PicardReport:
    """Dimensions of the identity component of the Picard group data."""
    algebra = pair.algebra
    conj = algebra.conjugation
    r = len(algebra.cartan_indices) // 2
    lbar = conj.apply_subspace(pair.l_plus.subspace)
    h1 = ce_cohomology(algebra, lbar)[1]
    tangent = total_cohomology(pair)[1]
    return PicardReport(r, h1, tangent)
