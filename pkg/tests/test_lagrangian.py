from fractions import Fraction
from itertools import product

import pytest

from gkverify.exactfield import Matrix, Scalar, Subspace
from gkverify.lagrangian import (
    BDTriple,
    Double,
    LagrangianSubalgebra,
    enumerate_bd,
    evens_lu,
    gk_pair,
    samelson,
    simple_root_ids,
    split_classify,
)
from gkverify.liealg import GroupSpec, build


def sc(x, d=1):
    return Scalar(Fraction(x), d=d)


@pytest.fixture(scope="module")
def torus():
    return build(GroupSpec((), 2, Matrix.identity(2), 1))


@pytest.fixture(scope="module")
def a1u1():
    return build(GroupSpec((("A", 1),), 1, Matrix([[sc(8)]]), 1))


@pytest.fixture(scope="module")
def a1a1():
    return build(GroupSpec((("A", 1), ("A", 1)), 0, None, 1))


@pytest.fixture(scope="module")
def a2():
    return build(GroupSpec((("A", 2),), 0, None, 3))


def torus_t10(alg):
    i_s = Scalar.i(alg.d)
    one = Scalar.one(alg.d)
    z = Scalar.zero(alg.d)
    return Subspace.span(2, [(one, i_s)])


def a1u1_t10(alg, sign=-1):
    i_s = Scalar.i(alg.d)
    z = Scalar.zero(alg.d)
    pm = i_s if sign > 0 else -i_s
    return Subspace.span(4, [(z, z, i_s, pm)])


def a2_t10(alg):
    # isotropic line x*h1 + y*h2 with x/y = (1 + i sqrt3)/2
    x = Scalar(Fraction(1, 2), Fraction(0), Fraction(0), Fraction(1, 2), d=3)
    one = Scalar.one(3)
    z = Scalar.zero(3)
    return Subspace.span(8, [(z, z, z, z, z, z, x, one)])


class TestDouble:
    def test_pairing_symmetric_and_split(self, a1u1):
        alg, frame, conj = a1u1
        dbl = Double(alg)
        basis = [dbl.embed(alg.basis_vector(i), s)
                 for s in (0, 1) for i in range(alg.dim)]
        for x, y in product(basis, repeat=2):
            assert dbl.pair(x, y) == dbl.pair(y, x)
        # complementary isotropic halves witness split signature
        diag = Subspace.span(dbl.dim, [
            tuple(alg.basis_vector(i)) * 2 for i in range(alg.dim)])
        anti = Subspace.span(dbl.dim, [
            tuple(alg.basis_vector(i)) + tuple(-c for c in alg.basis_vector(i))
            for i in range(alg.dim)])
        for sp in (diag, anti):
            for u in sp.vectors():
                for v in sp.vectors():
                    assert not dbl.pair(u, v)
        assert diag.intersect(anti).dim == 0
        assert diag.sum(anti).dim == dbl.dim

    def test_bracket_ad_invariant(self, a1u1):
        alg, _, _ = a1u1
        dbl = Double(alg)
        basis = [dbl.embed(alg.basis_vector(i), s)
                 for s in (0, 1) for i in range(alg.dim)]
        for x, y, w in product(basis, repeat=3):
            lhs = dbl.pair(dbl.bracket(x, y), w)
            rhs = dbl.pair(y, dbl.bracket(x, w))
            assert lhs + rhs == Scalar.zero()

    def test_mixed_factors_commute(self, a1u1):
        alg, _, _ = a1u1
        dbl = Double(alg)
        for i in range(alg.dim):
            for j in range(alg.dim):
                out = dbl.bracket(dbl.embed(alg.basis_vector(i), 0),
                                  dbl.embed(alg.basis_vector(j), 1))
                assert all(not c for c in out)


class TestSamelson:
    def test_torus(self, torus):
        alg, frame, _ = torus
        l = samelson(frame, torus_t10(alg))
        assert l.subspace.dim == 1
        assert l.subspace == l.t10

    def test_a1u1_both_choices(self, a1u1):
        alg, frame, _ = a1u1
        for sign in (-1, 1):
            l = samelson(frame, a1u1_t10(alg, sign))
            assert l.subspace.dim == 2
            e = alg.basis_vector(0)
            assert l.subspace.contains_vector(e)

    def test_a2(self, a2):
        alg, frame, _ = a2
        l = samelson(frame, a2_t10(alg))
        assert l.subspace.dim == 4
        for rid in frame.positive_ids:
            assert l.subspace.contains_vector(frame.root_vector(rid))

    def test_opposite_system(self, a1u1):
        alg, frame, _ = a1u1
        l = samelson(frame, a1u1_t10(alg), frame.opposite_positive_ids())
        f = alg.basis_vector(1)
        assert l.subspace.contains_vector(f)

    def test_rejects_bad_t10(self, a1u1):
        alg, frame, _ = a1u1
        z = Scalar.zero()
        one = Scalar.one()
        i_s = Scalar.i()
        with pytest.raises(ValueError, match="isotropic"):
            samelson(frame, Subspace.span(4, [(z, z, one, z)]))
        with pytest.raises(ValueError, match="dimension"):
            samelson(frame, Subspace.span(4, [(z, z, i_s, -i_s),
                                              (z, z, i_s, i_s)]))
        with pytest.raises(ValueError, match="Cartan"):
            samelson(frame, Subspace.span(4, [(one, z, z, z)]))

    def test_rejects_bad_positive_system(self, a2):
        alg, frame, _ = a2
        ids = frame.positive_ids
        negs = frame.opposite_positive_ids()
        with pytest.raises(ValueError, match="wrong size"):
            samelson(frame, a2_t10(alg), ids + (negs[0],))
        paired = (ids[0], ids[1], frame.roots[ids[0]].negative_rid)
        with pytest.raises(ValueError, match="opposite pair"):
            samelson(frame, a2_t10(alg), paired)
        # one root flipped: not additively closed, so not a subalgebra
        mixed = (ids[0], ids[1], negs[2])
        with pytest.raises(ValueError, match="closed"):
            samelson(frame, a2_t10(alg), mixed)


class TestBDTriples:
    def test_simple_roots(self, a2, a1a1, torus):
        _, frame, _ = a2
        assert simple_root_ids(frame) == (0, 1)
        _, frame2, _ = a1a1
        assert len(simple_root_ids(frame2)) == 2
        _, frame0, _ = torus
        assert simple_root_ids(frame0) == ()

    def test_counts(self, torus, a1u1, a1a1, a2):
        assert len(enumerate_bd(torus[1])) == 1
        assert len(enumerate_bd(a1u1[1])) == 2
        assert len(enumerate_bd(a1a1[1])) == 7
        assert len(enumerate_bd(a2[1])) == 7

    def test_a2_full_triples_include_swap(self, a2):
        _, frame, _ = a2
        full = [t for t in enumerate_bd(frame) if len(t.p) == 2]
        images = {t.pi for t in full}
        assert images == {(0, 1), (1, 0)}

    def test_cross_factor_isometry(self, a1a1):
        _, frame, _ = a1a1
        simple = simple_root_ids(frame)
        swap = BDTriple((simple[0],), (simple[1],), (simple[1],))
        assert swap in enumerate_bd(frame)


class TestEvensLu:
    def test_torus_split_f(self, torus):
        alg, frame, _ = torus
        dbl = Double(alg)
        w = (Scalar.one(), Scalar.i())
        f = Subspace.span(4, [dbl.embed(w, 0), dbl.embed(w, 1)])
        triple = BDTriple((), (), ())
        lag = evens_lu(frame, triple, f)
        assert lag.subspace.dim == 2
        res = split_classify(lag)
        assert res.is_split and res.gc_flag
        assert res.left == Subspace.span(2, [w])

    def test_torus_diagonal_f(self, torus):
        alg, frame, _ = torus
        diag = Subspace.span(4, [
            tuple(alg.basis_vector(i)) * 2 for i in range(2)])
        lag = evens_lu(frame, BDTriple((), (), ()), diag)
        res = split_classify(lag)
        assert not res.is_split
        assert not res.gc_flag

    def test_a1u1_full_p(self, a1u1):
        alg, frame, _ = a1u1
        dbl = Double(alg)
        z_vec = alg.basis_vector(3)
        f = Subspace.span(8, [tuple(z_vec) * 2])
        triple = BDTriple((0,), (0,), (0,))
        lag = evens_lu(frame, triple, f)
        assert lag.subspace.dim == 4
        # graph of the identity on sl2 sits inside
        for i in range(3):
            assert lag.subspace.contains_vector(tuple(alg.basis_vector(i)) * 2)
        res = split_classify(lag)
        assert not res.is_split
        assert not res.gc_flag

    def test_a2_singleton_shift(self, a2):
        alg, frame, _ = a2
        dbl = Double(alg)
        h1, h2 = alg.basis_vector(6), alg.basis_vector(7)
        w_p = tuple(a + b + b for a, b in zip(h1, h2))      # h1 + 2 h2
        w_pp = tuple(a + a + b for a, b in zip(h1, h2))     # 2 h1 + h2
        assert alg.kappa_of(w_p, w_p) == sc(-36)
        assert alg.kappa_of(w_pp, w_pp) == sc(-36)
        f = Subspace.span(16, [tuple(w_p) + tuple(w_pp)])
        triple = BDTriple((0,), (1,), (1,))
        lag = evens_lu(frame, triple, f)
        assert lag.subspace.dim == 8
        # psi maps the alpha1 line to the alpha2 line
        a1_vec = frame.root_vector(0)
        a2_vec = frame.root_vector(1)
        assert lag.subspace.contains_vector(tuple(a1_vec) + tuple(a2_vec))
        res = split_classify(lag)
        assert not res.is_split

    def test_a2_full_p_with_bracket_extension(self, a2):
        alg, frame, _ = a2
        f = Subspace.zero(16)
        triple = BDTriple((0, 1), (0, 1), (0, 1))
        lag = evens_lu(frame, triple, f)
        assert lag.subspace.dim == 8
        # the height-two root vector maps through the bracket ladder
        e13 = frame.root_vector(2)
        assert lag.subspace.contains_vector(tuple(e13) + tuple(e13))

    def test_rejects_non_lagrangian_f(self, a1u1):
        alg, frame, _ = a1u1
        dbl = Double(alg)
        z_vec = alg.basis_vector(3)
        bad = Subspace.span(8, [dbl.embed(z_vec, 0)])
        with pytest.raises(ValueError, match="isotropic"):
            evens_lu(frame, BDTriple((0,), (0,), (0,)), bad)
        small = Subspace.zero(8)
        with pytest.raises(ValueError, match="Lagrangian"):
            evens_lu(frame, BDTriple((0,), (0,), (0,)), small)
        stray = Subspace.span(8, [dbl.embed(alg.basis_vector(0), 0)])
        with pytest.raises(ValueError, match="does not lie"):
            evens_lu(frame, BDTriple((0,), (0,), (0,)), stray)

    def test_rejects_non_isometry(self):
        spec = GroupSpec((("A", 2), ("A", 1)), 1, Matrix([[sc(12, 3)]]), 3)
        alg, frame, conj = build(spec)
        simple = simple_root_ids(frame)
        a2_root, a1_root = simple[0], simple[2]
        norms = [alg.kappa_of(frame.coroot(r), frame.coroot(r))
                 for r in (a2_root, a1_root)]
        assert norms[0] != norms[1]
        cross = BDTriple((a2_root,), (a1_root,), (a1_root,))
        with pytest.raises(ValueError, match="isometry"):
            evens_lu(frame, cross, Subspace.zero(2 * alg.dim))


class TestGKPair:
    def test_canonical(self, a1u1):
        alg, frame, _ = a1u1
        l = samelson(frame, a1u1_t10(alg))
        pair = gk_pair(l, l)
        assert pair.canonical and pair.induced
        assert pair.L_plus.subspace.dim == alg.dim
        h = alg.basis_vector(2)
        assert pair.rho_plus == tuple(c * Fraction(-1, 8) for c in h)
        assert pair.rho_minus == pair.rho_plus

    def test_induced_not_canonical(self, a1u1):
        alg, frame, _ = a1u1
        lp = samelson(frame, a1u1_t10(alg, -1))
        lm = samelson(frame, a1u1_t10(alg, +1))
        pair = gk_pair(lp, lm)
        assert pair.induced and not pair.canonical

    def test_not_induced(self, a1u1):
        alg, frame, _ = a1u1
        lp = samelson(frame, a1u1_t10(alg))
        lm = samelson(frame, a1u1_t10(alg), frame.opposite_positive_ids())
        pair = gk_pair(lp, lm)
        assert not pair.induced and not pair.canonical
        assert pair.rho_minus == tuple(-c for c in pair.rho_plus)

    def test_torus_pair_flags(self, torus):
        alg, frame, _ = torus
        l = samelson(frame, torus_t10(alg))
        pair = gk_pair(l, l)
        assert pair.canonical and pair.induced

    def test_lagrangian_invariants(self, a1u1):
        alg, frame, _ = a1u1
        dbl = Double(alg)
        lp = samelson(frame, a1u1_t10(alg, -1))
        lm = samelson(frame, a1u1_t10(alg, +1))
        pair = gk_pair(lp, lm)
        for lag in (pair.L_plus, pair.L_minus):
            basis = lag.subspace.vectors()
            for u in basis:
                for v in basis:
                    assert not dbl.pair(u, v)
            assert not dbl.meets_compact_pair(lag.subspace)
        # intersections with the factors recover the halves
        full = Subspace.full(alg.dim)
        zero = Subspace.zero(alg.dim)
        res = split_classify(pair.L_plus)
        assert res.is_split and res.gc_flag
        assert res.left == lm.subspace
        assert res.right == lp.subspace
        resm = split_classify(pair.L_minus)
        assert resm.left == lm.conjugate_subspace()

    def test_dual_bases(self, a1u1, a2):
        for alg, frame, _ in (a1u1, a2):
            t10 = a1u1_t10(alg) if alg.dim == 4 else a2_t10(alg)
            l = samelson(frame, t10)
            pair = gk_pair(l, l)
            b_plus, b_bar = pair.dual_plus
            assert len(b_plus) == alg.dim // 2
            for i, u in enumerate(b_plus):
                for j, v in enumerate(b_bar):
                    expected = Scalar.one() if i == j else Scalar.zero()
                    assert alg.kappa_of(u, v) == expected

    def test_mismatched_algebras(self, torus, a1u1):
        alg_t, frame_t, _ = torus
        alg_a, frame_a, _ = a1u1
        lt = samelson(frame_t, torus_t10(alg_t))
        la = samelson(frame_a, a1u1_t10(alg_a))
        with pytest.raises(ValueError, match="mismatched"):
            gk_pair(lt, la)
