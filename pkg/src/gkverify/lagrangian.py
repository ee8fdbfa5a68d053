"""Lagrangian subalgebras of the double d = g (+) g.

The double carries the pairing <(a, a'), (b, b')> = kappa(a', b') -
kappa(a, b) and the componentwise bracket.  Vectors of d are tuples of
length 2 dim(g), first copy then second.

Three families of middle-dimensional isotropic subalgebras are built
here: Samelson subalgebras l = n_+ (+) t10 of g itself, their boxes
l_a [+] l_b inside d, and the parabolic-type representatives
F (+) (n_P [+] n_P'^-) (+) graph(psi) attached to a triple (P, P', pi)
of simple-root subsets with an isometry between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Optional, Sequence

from .exactfield import Matrix, Scalar, Subspace, kernel
from .liealg import CartanFrame, LieAlgebra, dual_basis

Vector = tuple


def _proportionality(w: Sequence[Scalar], a: Sequence[Scalar]) -> Scalar:
    """The scalar N with w = N a, for nonzero a; error when not parallel."""
    ratio = None
    for x, y in zip(w, a):
        if y:
            ratio = x / y
            break
    if ratio is None:
        raise ValueError("proportionality against the zero vector")
    if any(x != ratio * y for x, y in zip(w, a)):
        raise ValueError("vectors are not parallel")
    return ratio


class Double:
    """g (+) g with the split pairing and componentwise bracket."""

    def __init__(self, algebra: LieAlgebra):
        self.algebra = algebra
        self.dim = 2 * algebra.dim

    def split(self, vec: Sequence[Scalar]) -> tuple[Vector, Vector]:
        n = self.algebra.dim
        return tuple(vec[:n]), tuple(vec[n:])

    def embed(self, vec: Sequence[Scalar], side: int) -> Vector:
        zero = self.algebra.zero_vector()
        if side == 0:
            return tuple(vec) + zero
        return zero + tuple(vec)

    def pair(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
        a, ap = self.split(x)
        b, bp = self.split(y)
        return self.algebra.kappa_of(ap, bp) - self.algebra.kappa_of(a, b)

    def bracket(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Vector:
        a, ap = self.split(x)
        b, bp = self.split(y)
        return self.algebra.bracket(a, b) + self.algebra.bracket(ap, bp)

    def box(self, left: Subspace, right: Subspace) -> Subspace:
        """The subspace left [+] right of d."""
        vecs = [self.embed(v, 0) for v in left.vectors()]
        vecs += [self.embed(v, 1) for v in right.vectors()]
        return Subspace.span(self.dim, vecs)

    def conj_vector(self, vec: Sequence[Scalar]) -> Vector:
        conj = self.algebra.conjugation
        a, ap = self.split(vec)
        return tuple(conj.apply(a)) + tuple(conj.apply(ap))

    def conj_subspace(self, space: Subspace) -> Subspace:
        return Subspace.span(self.dim,
                             [self.conj_vector(v) for v in space.vectors()])

    def meets_compact_pair(self, space: Subspace) -> bool:
        """Whether space intersects k [+] k nontrivially.

        The intersection with the conjugate subspace is conjugation
        stable, so it is nonzero exactly when it holds a real point.
        """
        return space.intersect(self.conj_subspace(space)).dim > 0


@dataclass(frozen=True)
class SamelsonSubalgebra:
    """l = n_+ (+) t10 for a positive system and an isotropic half of h."""

    frame: CartanFrame
    positive_ids: tuple
    t10: Subspace
    subspace: Subspace

    @property
    def algebra(self) -> LieAlgebra:
        return self.frame.algebra

    def rho(self) -> Vector:
        return self.frame.weyl_for(self.positive_ids)

    def conjugate_subspace(self) -> Subspace:
        return self.algebra.conjugation.apply_subspace(self.subspace)


def samelson(frame: CartanFrame, t10: Subspace,
             positive_ids: Optional[Sequence[int]] = None) -> SamelsonSubalgebra:
    """Validated l = n_+ (+) t10; raises ValueError on any failed invariant."""
    algebra = frame.algebra
    if positive_ids is None:
        positive_ids = frame.positive_ids
    positive_ids = tuple(positive_ids)
    chosen = set(positive_ids)
    if len(chosen) != len(frame.roots) // 2:
        raise ValueError("positive system has the wrong size")
    for rid in positive_ids:
        if frame.roots[rid].negative_rid in chosen:
            raise ValueError("positive system contains an opposite pair")

    if t10.ambient != algebra.dim:
        raise ValueError("t10 ambient dimension mismatch")
    if not frame.cartan.contains(t10):
        raise ValueError("t10 does not lie in the Cartan subalgebra")
    rank = len(algebra.cartan_indices)
    if 2 * t10.dim != rank:
        raise ValueError(f"t10 has dimension {t10.dim}, expected {rank // 2}")
    for u in t10.vectors():
        for v in t10.vectors():
            if algebra.kappa_of(u, v):
                raise ValueError("t10 is not kappa-isotropic")
    conj = algebra.conjugation
    if t10.intersect(conj.apply_subspace(t10)).dim:
        raise ValueError("t10 meets the real torus")

    vecs = [frame.root_vector(rid) for rid in positive_ids]
    vecs += list(t10.vectors())
    subspace = Subspace.span(algebra.dim, vecs)
    if 2 * subspace.dim != algebra.dim:
        raise ValueError("Samelson subspace is not middle-dimensional")
    basis = subspace.vectors()
    for u in basis:
        for v in basis:
            if algebra.kappa_of(u, v):
                raise ValueError("Samelson subspace is not isotropic")
            if not subspace.contains_vector(algebra.bracket(u, v)):
                raise ValueError("Samelson subspace is not bracket-closed")
    if subspace.intersect(conj.apply_subspace(subspace)).dim:
        raise ValueError("Samelson subspace meets the compact form")
    for idx in algebra.cartan_indices:
        h = algebra.basis_vector(idx)
        for v in basis:
            if not subspace.contains_vector(algebra.bracket(h, v)):
                raise ValueError("Samelson subspace is not torus-stable")
    return SamelsonSubalgebra(frame, positive_ids, t10, subspace)


@dataclass(frozen=True)
class BDTriple:
    """Subsets p, p_prime of the simple roots with a bijection pi.

    All three are stored as root-id tuples; pi[k] is the image of p[k].
    """

    p: tuple
    p_prime: tuple
    pi: tuple

    def image_of(self, rid: int) -> int:
        return self.pi[self.p.index(rid)]


def simple_root_ids(frame: CartanFrame) -> tuple:
    """Positive roots that are not sums of two positive roots."""
    value_set = {frame.roots[rid].values for rid in frame.positive_ids}
    out = []
    for rid in frame.positive_ids:
        v = frame.roots[rid].values
        decomposable = False
        for other in frame.positive_ids:
            w = frame.roots[other].values
            if other != rid and tuple(a - b for a, b in zip(v, w)) in value_set:
                decomposable = True
                break
        if not decomposable:
            out.append(rid)
    return tuple(out)


def _is_isometry(frame: CartanFrame, triple: BDTriple) -> bool:
    algebra = frame.algebra
    for a, fa in zip(triple.p, triple.pi):
        for b, fb in zip(triple.p, triple.pi):
            lhs = algebra.kappa_of(frame.coroot(a), frame.coroot(b))
            rhs = algebra.kappa_of(frame.coroot(fa), frame.coroot(fb))
            if lhs != rhs:
                return False
    return True


def enumerate_bd(frame: CartanFrame) -> tuple:
    """All triples (P, P', pi) passing the isometry check, brute force."""
    simple = simple_root_ids(frame)
    if len(simple) > 3:
        raise ValueError("enumeration bounded at three simple roots")
    triples = []
    for size in range(len(simple) + 1):
        for p in combinations(simple, size):
            for p_prime in combinations(simple, size):
                for image in permutations(p_prime):
                    candidate = BDTriple(p, p_prime, image)
                    if _is_isometry(frame, candidate):
                        triples.append(candidate)
    return tuple(triples)


@dataclass(frozen=True)
class LagrangianSubalgebra:
    """Middle-dimensional isotropic subalgebra of the double."""

    double: Double
    subspace: Subspace
    triple: Optional[BDTriple] = None
    f_space: Optional[Subspace] = None


def _validate_lagrangian(double: Double, subspace: Subspace) -> None:
    if 2 * subspace.dim != double.dim:
        raise ValueError("subspace is not middle-dimensional")
    basis = subspace.vectors()
    for u in basis:
        for v in basis:
            if double.pair(u, v):
                raise ValueError("subspace is not isotropic")
    for u in basis:
        for v in basis:
            if not subspace.contains_vector(double.bracket(u, v)):
                raise ValueError("subspace is not bracket-closed")


def _levi_center(frame: CartanFrame, p: Sequence[int]) -> Subspace:
    """Vectors of h annihilated by every root in p, as a subspace of g."""
    algebra = frame.algebra
    indices = algebra.cartan_indices
    rank = len(indices)
    kernel_basis = []
    if not p:
        coeff_space = Subspace.full(rank, algebra.d)
    else:
        rows = [[frame.roots[rid].values[k] for k in range(rank)] for rid in p]
        coeff_space = kernel(Matrix(rows))
    for coeffs in coeff_space.vectors():
        vec = [Scalar.zero(algebra.d)] * algebra.dim
        for c, idx in zip(coeffs, indices):
            vec[idx] = c
        kernel_basis.append(tuple(vec))
    return Subspace.span(algebra.dim, kernel_basis)


def _subsystem_positives(frame: CartanFrame, p: Sequence[int]) -> tuple:
    """Positive roots lying in the rational span of the roots in p."""
    if not p:
        return ()
    rank = len(frame.algebra.cartan_indices)
    span = Subspace.span(rank, [frame.roots[rid].values for rid in p])
    return tuple(rid for rid in frame.positive_ids
                 if span.contains_vector(frame.roots[rid].values))


def _extend_root_map(frame: CartanFrame, triple: BDTriple) -> dict:
    """psi on every root vector of the p-subsystem, built from simple images.

    psi(a_alpha) = a_{pi alpha} on simple roots and their negatives, then
    up the height ladder by psi([x, y]) = [psi x, psi y].
    """
    algebra = frame.algebra
    psi = {}
    for rid, image in zip(triple.p, triple.pi):
        neg, neg_image = frame.roots[rid].negative_rid, frame.roots[image].negative_rid
        psi[rid] = frame.root_vector(image)
        psi[neg] = frame.root_vector(neg_image)
    pending = [rid for rid in _subsystem_positives(frame, triple.p)
               if rid not in psi]
    while pending:
        progressed = False
        remaining = []
        for rid in pending:
            values = frame.roots[rid].values
            done = None
            for a in triple.p:
                rest = tuple(x - y for x, y in zip(values, frame.roots[a].values))
                b = frame.find_root(rest)
                if b is not None and b in psi and a in psi:
                    done = (a, b)
                    break
            if done is None:
                remaining.append(rid)
                continue
            a, b = done
            for first, second, target in (
                (a, b, rid),
                (frame.roots[a].negative_rid, frame.roots[b].negative_rid,
                 frame.roots[rid].negative_rid),
            ):
                lhs = algebra.bracket(frame.root_vector(first),
                                      frame.root_vector(second))
                n = _proportionality(lhs, frame.root_vector(target))
                image = algebra.bracket(psi[first], psi[second])
                psi[target] = tuple(c / n for c in image)
            progressed = True
        if not progressed:
            raise ValueError("root map extension stalled")
        pending = remaining
    return psi


def evens_lu(frame: CartanFrame, triple: BDTriple,
             f_space: Subspace) -> LagrangianSubalgebra:
    """F (+) (n_P [+] n_P'^-) (+) graph(psi), validated."""
    algebra = frame.algebra
    double = Double(algebra)
    simple = set(simple_root_ids(frame))
    if not (set(triple.p) <= simple and set(triple.p_prime) <= simple):
        raise ValueError("triple subsets must consist of simple roots")
    if sorted(triple.pi) != sorted(triple.p_prime) or len(triple.p) != len(triple.p_prime):
        raise ValueError("pi is not a bijection onto p_prime")
    if not _is_isometry(frame, triple):
        raise ValueError("pi is not an isometry")

    z_p = _levi_center(frame, triple.p)
    z_p_prime = _levi_center(frame, triple.p_prime)
    z_box = double.box(z_p, z_p_prime)
    if f_space.ambient != double.dim or not z_box.contains(f_space):
        raise ValueError("F does not lie in z_P [+] z_P'")
    for u in f_space.vectors():
        for v in f_space.vectors():
            if double.pair(u, v):
                raise ValueError("F is not isotropic")
    if 2 * f_space.dim != z_box.dim:
        raise ValueError("F is not Lagrangian in z_P [+] z_P'")

    sub_p = _subsystem_positives(frame, triple.p)
    sub_p_prime = _subsystem_positives(frame, triple.p_prime)
    psi = _extend_root_map(frame, triple)

    vecs = list(f_space.vectors())
    for rid in frame.positive_ids:
        if rid not in sub_p:
            vecs.append(double.embed(frame.root_vector(rid), 0))
        if rid not in sub_p_prime:
            neg = frame.roots[rid].negative_rid
            vecs.append(double.embed(frame.root_vector(neg), 1))
    for rid in sub_p:
        neg = frame.roots[rid].negative_rid
        vecs.append(tuple(frame.root_vector(rid)) + psi[rid])
        vecs.append(tuple(frame.root_vector(neg)) + psi[neg])
    for rid, image in zip(triple.p, triple.pi):
        vecs.append(tuple(frame.coroot(rid)) + tuple(frame.coroot(image)))

    subspace = Subspace.span(double.dim, vecs)
    _validate_lagrangian(double, subspace)
    return LagrangianSubalgebra(double, subspace, triple, f_space)


@dataclass(frozen=True)
class SplitResult:
    is_split: bool
    left: Optional[Subspace]
    right: Optional[Subspace]
    gc_flag: bool


def split_classify(lagrangian: LagrangianSubalgebra) -> SplitResult:
    """Splitness into (L cap g[+]0) (+) (L cap 0[+]g), and the k [+] k test."""
    double = lagrangian.double
    algebra = double.algebra
    n = algebra.dim
    full = Subspace.full(n, algebra.d)
    zero = Subspace.zero(n)
    left_box = lagrangian.subspace.intersect(double.box(full, zero))
    right_box = lagrangian.subspace.intersect(double.box(zero, full))
    gc_flag = not double.meets_compact_pair(lagrangian.subspace)
    if left_box.dim + right_box.dim != lagrangian.subspace.dim:
        return SplitResult(False, None, None, gc_flag)
    left = Subspace.span(n, [double.split(v)[0] for v in left_box.vectors()])
    right = Subspace.span(n, [double.split(v)[1] for v in right_box.vectors()])
    return SplitResult(True, left, right, gc_flag)


@dataclass(frozen=True)
class GKPair:
    """The pair of Lagrangians L_plus = l_- [+] l_+, L_minus = lbar_- [+] l_+."""

    l_plus: SamelsonSubalgebra
    l_minus: SamelsonSubalgebra
    L_plus: LagrangianSubalgebra
    L_minus: LagrangianSubalgebra
    induced: bool
    canonical: bool
    dual_plus: tuple
    dual_minus: tuple
    rho_plus: Vector
    rho_minus: Vector

    @property
    def algebra(self) -> LieAlgebra:
        return self.l_plus.algebra


def gk_pair(l_plus: SamelsonSubalgebra,
            l_minus: SamelsonSubalgebra) -> GKPair:
    """Assemble and verify the Lagrangian pair of two Samelson subalgebras."""
    if l_plus.algebra is not l_minus.algebra:
        raise ValueError("mismatched ambient algebra")
    algebra = l_plus.algebra
    conj = algebra.conjugation
    double = Double(algebra)

    lbar_plus = conj.apply_subspace(l_plus.subspace)
    lbar_minus = conj.apply_subspace(l_minus.subspace)
    big_plus = double.box(l_minus.subspace, l_plus.subspace)
    big_minus = double.box(lbar_minus, l_plus.subspace)
    for space in (big_plus, big_minus):
        _validate_lagrangian(double, space)
        if double.meets_compact_pair(space):
            raise ValueError("Lagrangian meets k [+] k")

    induced = set(l_plus.positive_ids) == set(l_minus.positive_ids)
    canonical = l_plus.subspace == l_minus.subspace
    return GKPair(
        l_plus=l_plus,
        l_minus=l_minus,
        L_plus=LagrangianSubalgebra(double, big_plus),
        L_minus=LagrangianSubalgebra(double, big_minus),
        induced=induced,
        canonical=canonical,
        dual_plus=dual_basis(algebra, l_plus.subspace, lbar_plus),
        dual_minus=dual_basis(algebra, l_minus.subspace, lbar_minus),
        rho_plus=l_plus.rho(),
        rho_minus=l_minus.rho(),
    )
