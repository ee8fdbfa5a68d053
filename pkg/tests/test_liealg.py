from fractions import Fraction
from itertools import product

import pytest

from gkverify.exactfield import Matrix, Scalar, Subspace
from gkverify.liealg import (
    GroupSpec,
    build,
    cartan_three_form,
    dual_basis,
    weyl_norm,
)


def sc(x, d=1):
    return Scalar(Fraction(x), d=d)


def torus_spec(rank=2):
    return GroupSpec((), rank, Matrix.identity(rank), 1)


def a1u1_spec():
    return GroupSpec((("A", 1),), 1, Matrix([[sc(8)]]), 1)


def a1a1_spec():
    return GroupSpec((("A", 1), ("A", 1)), 0, None, 1)


def a2_spec():
    return GroupSpec((("A", 2),), 0, None, 3)


ALL_SPECS = [torus_spec, a1u1_spec, a1a1_spec, a2_spec]


def test_spec_validation():
    with pytest.raises(ValueError):
        build(GroupSpec((("A", 1),), 0))  # dim 3 odd
    with pytest.raises(ValueError):
        build(GroupSpec((("A", 2),), 1, Matrix([[sc(1)]]), 3))  # rank 3 odd
    bad_gram = Matrix([[sc(-1)]])
    with pytest.raises(ValueError):
        build(GroupSpec((("A", 1),), 1, bad_gram, 1))
    with pytest.raises(ValueError):
        build(GroupSpec((("B", 2),), 0))
    # strict=False admits the odd-dimensional bare A1
    alg, frame, _ = build(GroupSpec((("A", 1),), 0), strict=False)
    assert alg.dim == 3 and len(frame.roots) == 2


def test_torus_build():
    alg, frame, conj = build(torus_spec())
    assert alg.dim == 2
    assert frame.roots == ()
    assert frame.weyl == alg.zero_vector()
    assert alg.kappa == Matrix.identity(2)
    assert weyl_norm(frame) == Scalar.zero()
    assert conj.apply(alg.basis_vector(0)) == alg.basis_vector(0)


class TestA1U1:
    def setup_method(self):
        self.alg, self.frame, self.conj = build(a1u1_spec())

    def test_layout(self):
        assert self.alg.labels == ("e", "f", "h", "z1")
        assert self.alg.dim == 4
        assert [r.positive for r in self.frame.roots] == [True, False]

    def test_kappa_values(self):
        # Oracle: Killing(x,y) = 2m tr(xy) on sl(m); kappa = -Killing. For
        # sl2 matrix units: kappa(e,f) = -4, kappa(h,h) = -8.  The build path
        # computes the trace of ad.ad instead, so this cross-checks it.
        e, f, h, z = map(self.alg.basis_vector, range(4))
        assert self.alg.kappa_of(e, f) == sc(-4)
        assert self.alg.kappa_of(h, h) == sc(-8)
        assert self.alg.kappa_of(z, z) == sc(8)
        assert self.alg.kappa_of(e, e) == Scalar.zero()
        assert self.alg.kappa_of(h, z) == Scalar.zero()

    def test_root_vectors_and_coroot(self):
        e, f, h, _ = map(self.alg.basis_vector, range(4))
        pos = self.frame.positive_ids[0]
        neg = self.frame.roots[pos].negative_rid
        assert self.frame.root_vector(pos) == e
        # a_{-alpha} = f / kappa(e, f) = -f/4
        assert self.frame.root_vector(neg) == tuple(c * Fraction(-1, 4) for c in f)
        assert self.alg.kappa_of(self.frame.root_vector(pos),
                                 self.frame.root_vector(neg)) == Scalar.one()
        # h_alpha = [a_alpha, a_{-alpha}] = -h/4
        assert self.frame.coroot(pos) == tuple(c * Fraction(-1, 4) for c in h)

    def test_weyl_vector(self):
        h = self.alg.basis_vector(2)
        assert self.frame.weyl == tuple(c * Fraction(-1, 8) for c in h)
        assert weyl_norm(self.frame) == sc(Fraction(-1, 8))

    def test_opposite_system(self):
        opp = self.frame.opposite_positive_ids()
        rho_opp = self.frame.weyl_for(opp)
        assert rho_opp == tuple(-c for c in self.frame.weyl)


class TestA2:
    def setup_method(self):
        self.alg, self.frame, self.conj = build(a2_spec())

    def test_layout(self):
        assert self.alg.dim == 8
        assert len(self.frame.roots) == 6
        assert self.alg.labels[:3] == ("e12", "e23", "e13")
        assert self.alg.cartan_indices == (6, 7)

    def test_cartan_gram(self):
        # Oracle: Killing B(h_i,h_i) = 12, B(h_1,h_2) = -6 for sl3, kappa = -B.
        h1, h2 = self.alg.basis_vector(6), self.alg.basis_vector(7)
        assert self.alg.kappa_of(h1, h1) == sc(-12)
        assert self.alg.kappa_of(h1, h2) == sc(6)
        assert self.alg.kappa_of(h2, h2) == sc(-12)

    def test_compact_gram_positive_definite(self):
        gram = self.alg.compact_gram()
        n = gram.rows
        assert n == 8
        for k in range(1, n + 1):
            minor = Matrix([row[:k] for row in gram.data[:k]])
            det = _det(minor)
            assert det.is_rational() and det.rational_value() > 0
        # the i*t block reproduces the negated Cartan Gram
        assert gram[0, 0] == sc(12) and gram[0, 1] == sc(-6)

    def test_weyl_norm(self):
        # rho = -(h1+h2)/6 so kappa(rho,rho) = (-12-12+2*6)/36 = -1/3
        h1, h2 = self.alg.basis_vector(6), self.alg.basis_vector(7)
        expected = tuple((a + b) * Fraction(-1, 6) for a, b in zip(h1, h2))
        assert self.frame.weyl == expected
        assert weyl_norm(self.frame) == sc(Fraction(-1, 3), d=3)

    def test_root_sum_lookup(self):
        r0, r1 = self.frame.roots[0], self.frame.roots[1]
        summed = tuple(a + b for a, b in zip(r0.values, r1.values))
        rid = self.frame.find_root(summed)
        assert rid == 2  # alpha1 + alpha2 = the (1,3) root


@pytest.mark.parametrize("mk_spec", ALL_SPECS)
def test_jacobi_and_antisymmetry(mk_spec):
    alg, _, _ = build(mk_spec())
    basis = [alg.basis_vector(i) for i in range(alg.dim)]
    for a, b in product(basis, repeat=2):
        ab = alg.bracket(a, b)
        ba = alg.bracket(b, a)
        assert ab == tuple(-c for c in ba)
    for a, b, c in product(basis, repeat=3):
        term1 = alg.bracket(a, alg.bracket(b, c))
        term2 = alg.bracket(b, alg.bracket(c, a))
        term3 = alg.bracket(c, alg.bracket(a, b))
        total = tuple(x + y + z for x, y, z in zip(term1, term2, term3))
        assert all(not t for t in total)


@pytest.mark.parametrize("mk_spec", ALL_SPECS)
def test_kappa_ad_invariant_symmetric_nondegenerate(mk_spec):
    alg, _, _ = build(mk_spec())
    basis = [alg.basis_vector(i) for i in range(alg.dim)]
    assert alg.kappa == alg.kappa.transpose()
    alg.kappa.inverse()  # nondegenerate or raises
    for a, b, c in product(basis, repeat=3):
        lhs = alg.kappa_of(alg.bracket(a, b), c)
        rhs = alg.kappa_of(b, alg.bracket(a, c))
        assert lhs + rhs == Scalar.zero()


@pytest.mark.parametrize("mk_spec", [a1u1_spec, a1a1_spec, a2_spec])
def test_root_space_properties(mk_spec):
    alg, frame, conj = build(mk_spec())
    assert alg.dim == len(alg.cartan_indices) + len(frame.roots)
    for root in frame.roots:
        vec = frame.root_vector(root.rid)
        for idx in alg.cartan_indices:
            h = alg.basis_vector(idx)
            expected = tuple(frame.root_value(root.rid, h) * c for c in vec)
            assert alg.bracket(h, vec) == expected
    # kappa(h_alpha, h) = alpha(h) on the whole Cartan
    for rid in frame.positive_ids:
        h_alpha = frame.coroot(rid)
        for idx in alg.cartan_indices:
            h = alg.basis_vector(idx)
            assert alg.kappa_of(h_alpha, h) == frame.root_value(rid, h)
        # h_alpha lies in i*t: rational coords on the simple-factor Cartan,
        # nothing anywhere else
        for k, c in enumerate(h_alpha):
            if k in alg.center_indices or k not in alg.cartan_indices:
                assert not c
            else:
                assert c.is_rational()
    # conjugation swaps the root spaces g_alpha and g_{-alpha}
    for root in frame.roots:
        image = conj.apply(frame.root_vector(root.rid))
        neg_vec = frame.root_vector(root.negative_rid)
        line = Subspace.span(alg.dim, [neg_vec])
        assert line.contains_vector(image)


@pytest.mark.parametrize("mk_spec", ALL_SPECS)
def test_conjugation_properties(mk_spec):
    alg, _, conj = build(mk_spec())
    i_s = Scalar.i(alg.d)
    for idx in range(alg.dim):
        v = alg.basis_vector(idx)
        assert conj.apply(conj.apply(v)) == v
        scaled = tuple(i_s * c for c in v)
        assert conj.apply(scaled) == tuple(-i_s * c for c in conj.apply(v))
    for kb in alg.compact_basis:
        assert conj.apply(kb) == kb
    basis = [alg.basis_vector(i) for i in range(alg.dim)]
    for a, b in product(basis, repeat=2):
        assert conj.apply(alg.bracket(a, b)) == alg.bracket(conj.apply(a), conj.apply(b))
    # compact basis spans g over the complex field
    assert Subspace.span(alg.dim, alg.compact_basis).dim == alg.dim


def test_three_form_torus_vanishes():
    alg, _, _ = build(torus_spec())
    assert cartan_three_form(alg).is_zero()


def test_three_form_antisymmetry_and_a1_value():
    alg, _, _ = build(a1u1_spec())
    lam = cartan_three_form(alg)
    e, f, h, _ = map(alg.basis_vector, range(4))
    i_s = Scalar.i()
    ih = tuple(i_s * c for c in h)
    e_minus_f = tuple(a - b for a, b in zip(e, f))
    i_e_plus_f = tuple(i_s * (a + b) for a, b in zip(e, f))
    # Oracle: kappa(ih, [e-f, i(e+f)]) = i*i*kappa(h, 2h) = -2*(-8) = 16
    assert lam.on_vectors(ih, e_minus_f, i_e_plus_f) == sc(16)
    for i in range(alg.dim):
        for j in range(alg.dim):
            for k in range(alg.dim):
                a, b, c = alg.basis_vector(i), alg.basis_vector(j), alg.basis_vector(k)
                assert lam.on_vectors(a, b, c) == -lam.on_vectors(b, a, c)
                assert lam.on_basis(i, j, k) == lam.on_vectors(a, b, c)


def test_dual_basis_torus_self_dual():
    alg, _, _ = build(torus_spec())
    full = Subspace.full(2)
    b1, b2 = dual_basis(alg, full, full)
    for i, u in enumerate(b1):
        for j, v in enumerate(b2):
            expected = Scalar.one() if i == j else Scalar.zero()
            assert alg.kappa_of(u, v) == expected


def test_dual_basis_a1u1_pair():
    alg, _, _ = build(a1u1_spec())
    i_s = Scalar.i()
    z = Scalar.zero()
    l_plus = Subspace.span(4, [
        alg.basis_vector(0),                      # e
        (z, z, i_s, -i_s),                        # i(h - z)
    ])
    l_bar = Subspace.span(4, [
        alg.basis_vector(1),                      # f
        (z, z, i_s, i_s),                         # i(h + z)
    ])
    b1, b2 = dual_basis(alg, l_plus, l_bar)
    for i, u in enumerate(b1):
        for j, v in enumerate(b2):
            expected = Scalar.one() if i == j else Scalar.zero()
            assert alg.kappa_of(u, v) == expected


def test_dual_basis_isotropic_line_fails():
    alg, _, _ = build(a1u1_spec())
    line = Subspace.span(4, [alg.basis_vector(0)])  # e is isotropic
    with pytest.raises(ValueError):
        dual_basis(alg, line, line)


def _det(m: Matrix) -> Scalar:
    n = m.rows
    if n == 0:
        return Scalar.one()
    acc = Scalar.zero()
    for j in range(n):
        if not m[0, j]:
            continue
        minor = Matrix([[m[i, k] for k in range(n) if k != j] for i in range(1, n)])
        term = m[0, j] * _det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc
