"""Complexified compact Lie algebras with exact root data.

Builds g = k tensor C for products of A1/A2 simple factors and abelian
directions, using sl(m) matrix units so all structure constants are
integers.  The bilinear form is kappa = -trace(ad . ad) on the semisimple
part, extended orthogonally by a positive-definite center Gram.  Root
vectors are normalized by kappa(a_alpha, a_{-alpha}) = 1, coroots are
h_alpha = [a_alpha, a_{-alpha}], and the compact conjugation acts by
e_pq -> -e_qp, h -> -h on sl factors and fixes central directions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactfield import Matrix, Scalar, Subspace

Vector = tuple  # coordinate tuple of Scalars over the global basis


@dataclass(frozen=True)
class GroupSpec:
    simple_factors: tuple = ()  # entries ("A", 1) or ("A", 2)
    abelian_rank: int = 0
    center_gram: Optional[Matrix] = None
    field_d: int = 1

    def total_dim(self) -> int:
        return sum((r + 1) ** 2 - 1 for _, r in self.simple_factors) + self.abelian_rank

    def total_rank(self) -> int:
        return sum(r for _, r in self.simple_factors) + self.abelian_rank


@dataclass(frozen=True)
class Root:
    rid: int
    factor: int
    values: tuple  # alpha(h_c) over the global Cartan basis order
    positive: bool
    negative_rid: int


class LieAlgebra:
    """Structure constants, kappa Gram and the compact real form of g."""

    def __init__(self, labels, bracket_table, kappa, compact_basis,
                 cartan_indices, center_indices, d):
        self.labels = tuple(labels)
        self.dim = len(labels)
        self.bracket_table = bracket_table
        self.kappa = kappa
        self.compact_basis = tuple(tuple(v) for v in compact_basis)
        self.cartan_indices = tuple(cartan_indices)
        self.center_indices = tuple(center_indices)
        self.d = d
        self._kappa_dual = None
        # filled in by build(); the antilinear compact conjugation
        self.conjugation: Conjugation | None = None

    def zero_vector(self) -> Vector:
        return tuple(Scalar.zero(self.d) for _ in range(self.dim))

    def basis_vector(self, i: int) -> Vector:
        return tuple(Scalar.one(self.d) if j == i else Scalar.zero(self.d)
                     for j in range(self.dim))

    def bracket(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
        out = [Scalar.zero(self.d)] * self.dim
        for i, ci in enumerate(u):
            if not ci:
                continue
            row = self.bracket_table[i]
            for j, cj in enumerate(v):
                if not cj:
                    continue
                entry = row[j]
                coeff = ci * cj
                for k, s in enumerate(entry):
                    if s:
                        out[k] = out[k] + coeff * s
        return tuple(out)

    def kappa_of(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
        acc = Scalar.zero(self.d)
        for i, ci in enumerate(u):
            if not ci:
                continue
            row = self.kappa.row(i)
            for j, cj in enumerate(v):
                if cj and row[j]:
                    acc = acc + ci * cj * row[j]
        return acc

    def kappa_covector(self, a: Sequence[Scalar]) -> Vector:
        """The covector kappa(a, .) in coordinates of the dual basis."""
        return tuple(self.kappa_of(a, self.basis_vector(j)) for j in range(self.dim))

    def ad_matrix(self, v: Sequence[Scalar]) -> Matrix:
        cols = [self.bracket(v, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix([[cols[j][i] for j in range(self.dim)] for i in range(self.dim)])

    def kappa_dual_basis(self) -> tuple:
        """Vectors e^i with kappa(x_i, e^j) = delta_ij."""
        if self._kappa_dual is None:
            inv = self.kappa.inverse()
            # column j of kappa^{-1} gives e^j over the basis
            self._kappa_dual = tuple(
                tuple(inv[i, j] for i in range(self.dim)) for j in range(self.dim)
            )
        return self._kappa_dual

    def compact_gram(self) -> Matrix:
        kb = self.compact_basis
        return Matrix([[self.kappa_of(a, b) for b in kb] for a in kb])


class CartanFrame:
    """Cartan subalgebra, roots, normalized root vectors, coroots, Weyl vector."""

    def __init__(self, algebra: LieAlgebra, roots, root_vectors, center_indices):
        self.algebra = algebra
        self.roots = tuple(roots)
        self.root_vectors = tuple(tuple(v) for v in root_vectors)
        n = algebra.dim
        self.cartan = Subspace.span(
            n, [algebra.basis_vector(i) for i in algebra.cartan_indices])
        self.center = Subspace.span(
            n, [algebra.basis_vector(i) for i in center_indices])
        self.positive_ids = tuple(r.rid for r in self.roots if r.positive)
        self._coroots = {}

    @property
    def rank(self) -> int:
        return len(self.algebra.cartan_indices)

    def root_vector(self, rid: int) -> Vector:
        return self.root_vectors[rid]

    def root_value(self, rid: int, h: Sequence[Scalar]) -> Scalar:
        """alpha(h) for h in the Cartan (given in global coordinates)."""
        alg = self.algebra
        acc = Scalar.zero(alg.d)
        for c, idx in enumerate(alg.cartan_indices):
            if h[idx]:
                acc = acc + self.roots[rid].values[c] * h[idx]
        return acc

    def coroot(self, rid: int) -> Vector:
        if rid not in self._coroots:
            neg = self.roots[rid].negative_rid
            self._coroots[rid] = self.algebra.bracket(
                self.root_vectors[rid], self.root_vectors[neg])
        return self._coroots[rid]

    def weyl_for(self, positive_ids: Sequence[int]) -> Vector:
        alg = self.algebra
        acc = list(alg.zero_vector())
        half = Scalar(Fraction(1, 2))
        for rid in positive_ids:
            for k, s in enumerate(self.coroot(rid)):
                if s:
                    acc[k] = acc[k] + half * s
        return tuple(acc)

    @property
    def weyl(self) -> Vector:
        return self.weyl_for(self.positive_ids)

    def find_root(self, values: Sequence[Scalar]) -> Optional[int]:
        for r in self.roots:
            if tuple(r.values) == tuple(values):
                return r.rid
        return None

    def opposite_positive_ids(self) -> tuple:
        return tuple(self.roots[rid].negative_rid for rid in self.positive_ids)


class Conjugation:
    """Antilinear compact conjugation v -> M . conjugate-coefficients(v)."""

    def __init__(self, algebra: LieAlgebra, matrix: Matrix):
        self.algebra = algebra
        self.matrix = matrix

    def apply(self, vec: Sequence[Scalar]) -> Vector:
        return self.matrix.matvec([c.conjugate() for c in vec])

    def apply_subspace(self, space: Subspace) -> Subspace:
        return Subspace.span(space.ambient, [self.apply(v) for v in space.vectors()])


def _root_pairs(m: int):
    """Index pairs (p, q), p < q, for the positive roots of sl(m), listed by
    height so the simple roots come first."""
    return sorted(((p, q) for p in range(m) for q in range(p + 1, m)),
                  key=lambda pq: (pq[1] - pq[0], pq[0]))


def _sl_basis(m: int):
    """Matrix-unit basis of sl(m): positives e_pq (p<q), negatives e_qp,
    then Cartans h_p = e_pp - e_{p+1,p+1}. Returns (labels, matrices)."""
    def unit(p, q):
        mat = [[Fraction(0)] * m for _ in range(m)]
        mat[p][q] = Fraction(1)
        return mat

    pairs = _root_pairs(m)
    labels, mats = [], []
    for p, q in pairs:
        labels.append("e" if m == 2 else f"e{p+1}{q+1}")
        mats.append(unit(p, q))
    for p, q in pairs:
        labels.append("f" if m == 2 else f"e{q+1}{p+1}")
        mats.append(unit(q, p))
    for p in range(m - 1):
        labels.append("h" if m == 2 else f"h{p+1}")
        mat = [[Fraction(0)] * m for _ in range(m)]
        mat[p][p], mat[p + 1][p + 1] = Fraction(1), Fraction(-1)
        mats.append(mat)
    return labels, mats


def _mat_commutator(a, b, m):
    out = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            acc = Fraction(0)
            for k in range(m):
                acc += a[i][k] * b[k][j] - b[i][k] * a[k][j]
            out[i][j] = acc
    return out


def _sl_coords(mat, m):
    """Coordinates of a traceless matrix over the _sl_basis order."""
    pairs = _root_pairs(m)
    coords = []
    for p, q in pairs:
        coords.append(mat[p][q])
    for p, q in pairs:
        coords.append(mat[q][p])
    partial = Fraction(0)
    for p in range(m - 1):
        partial += mat[p][p]
        coords.append(partial)
    return coords


def build(spec: GroupSpec, strict: bool = True):
    """Assemble (LieAlgebra, CartanFrame, Conjugation) for the given spec.

    strict=False drops the even-dimension/even-rank requirement; that mode
    exists for diagnostics on odd-dimensional algebras and is not reachable
    from the CLI.
    """
    if strict:
        if spec.total_dim() % 2 != 0:
            raise ValueError(f"total dimension {spec.total_dim()} is odd")
        if spec.total_rank() % 2 != 0:
            raise ValueError(f"total rank {spec.total_rank()} is odd")
    for ftype, frank in spec.simple_factors:
        if ftype != "A" or frank not in (1, 2):
            raise ValueError(f"unsupported simple factor {(ftype, frank)}")

    d = spec.field_d
    gram = spec.center_gram
    if spec.abelian_rank:
        if gram is None:
            raise ValueError("center_gram required when abelian_rank > 0")
        if gram.rows != spec.abelian_rank or gram.cols != spec.abelian_rank:
            raise ValueError("center_gram size mismatch")
        if gram != gram.transpose():
            raise ValueError("center_gram must be symmetric")
        for k in range(1, spec.abelian_rank + 1):
            minor = Matrix([row[:k] for row in gram.data[:k]])
            det = _det(minor)
            if not (det.is_rational() and det.rational_value() > 0):
                raise ValueError("center_gram must be positive definite")

    labels: list[str] = []
    factor_data = []  # (offset, m, basis matrices)
    multi = len(spec.simple_factors) > 1
    for f_idx, (_, frank) in enumerate(spec.simple_factors):
        m = frank + 1
        f_labels, f_mats = _sl_basis(m)
        prefix = f"{f_idx + 1}." if multi else ""
        offset = len(labels)
        labels.extend(prefix + lbl for lbl in f_labels)
        factor_data.append((offset, m, f_mats))
    center_offset = len(labels)
    labels.extend(f"z{j + 1}" for j in range(spec.abelian_rank))
    dim = len(labels)

    zero = Scalar.zero(d)
    one = Scalar.one(d)

    def global_coords(f_idx, local_coords):
        offset = factor_data[f_idx][0]
        vec = [zero] * dim
        for k, c in enumerate(local_coords):
            vec[offset + k] = Scalar(c, d=d)
        return tuple(vec)

    # bracket table: block-diagonal over factors, zero on the center
    bracket_rows = []
    for i in range(dim):
        row = []
        for j in range(dim):
            entry = tuple([zero] * dim)
            for f_idx, (offset, m, mats) in enumerate(factor_data):
                size = len(mats)
                if offset <= i < offset + size and offset <= j < offset + size:
                    comm = _mat_commutator(mats[i - offset], mats[j - offset], m)
                    entry = global_coords(f_idx, _sl_coords(comm, m))
                    break
            row.append(entry)
        bracket_rows.append(tuple(row))
    bracket_table = tuple(bracket_rows)

    cartan_indices = []
    for offset, m, mats in factor_data:
        n_pairs = m * (m - 1) // 2
        cartan_indices.extend(range(offset + 2 * n_pairs, offset + 2 * n_pairs + m - 1))
    center_indices = list(range(center_offset, dim))
    cartan_indices.extend(center_indices)

    # kappa = -trace(ad . ad) on the semisimple part, center Gram on the rest
    provisional = LieAlgebra(labels, bracket_table, Matrix.identity(dim, d),
                             [], cartan_indices, center_indices, d)
    ads = [provisional.ad_matrix(provisional.basis_vector(i)) for i in range(dim)]
    kappa_rows = []
    for i in range(dim):
        row = []
        for j in range(dim):
            acc = zero
            for a in range(dim):
                for b in range(dim):
                    if ads[i][a, b] and ads[j][b, a]:
                        acc = acc + ads[i][a, b] * ads[j][b, a]
            row.append(-acc)
        kappa_rows.append(row)
    for a in range(spec.abelian_rank):
        for b in range(spec.abelian_rank):
            entry = gram[a, b]
            kappa_rows[center_offset + a][center_offset + b] = (
                entry if isinstance(entry, Scalar) else Scalar(entry, d=d))
    kappa = Matrix(kappa_rows)

    # compact real form k: i*h_p, (e_pq - e_qp), i(e_pq + e_qp), z_j
    i_s = Scalar.i(d)
    compact = []
    for offset, m, mats in factor_data:
        n_pairs = m * (m - 1) // 2
        for p in range(m - 1):
            vec = [zero] * dim
            vec[offset + 2 * n_pairs + p] = i_s
            compact.append(tuple(vec))
        for k in range(n_pairs):
            vec = [zero] * dim
            vec[offset + k] = one
            vec[offset + n_pairs + k] = -one
            compact.append(tuple(vec))
            vec = [zero] * dim
            vec[offset + k] = i_s
            vec[offset + n_pairs + k] = i_s
            compact.append(tuple(vec))
    for j in range(spec.abelian_rank):
        vec = [zero] * dim
        vec[center_offset + j] = one
        compact.append(tuple(vec))

    algebra = LieAlgebra(labels, bracket_table, kappa, compact,
                         cartan_indices, center_indices, d)

    # conjugation: e_pq -> -e_qp, h -> -h, z -> z (then conjugate coefficients)
    conj_cols = []
    for i in range(dim):
        col = [zero] * dim
        placed = False
        for offset, m, mats in factor_data:
            size = len(mats)
            if offset <= i < offset + size:
                n_pairs = m * (m - 1) // 2
                local = i - offset
                if local < n_pairs:
                    col[offset + n_pairs + local] = -one
                elif local < 2 * n_pairs:
                    col[offset + (local - n_pairs)] = -one
                else:
                    col[i] = -one
                placed = True
                break
        if not placed:
            col[i] = one
        conj_cols.append(col)
    conj_matrix = Matrix([[conj_cols[j][i] for j in range(dim)] for i in range(dim)])
    conjugation = Conjugation(algebra, conj_matrix)
    algebra.conjugation = conjugation

    # roots: for each factor, alpha_pq on the Cartan basis, vectors normalized
    roots: list[Root] = []
    root_vectors: list[Vector] = []
    n_cartan = len(cartan_indices)
    for f_idx, (offset, m, mats) in enumerate(factor_data):
        pairs = _root_pairs(m)
        n_pairs = len(pairs)
        ordered = [(p, q, k, True) for k, (p, q) in enumerate(pairs)]
        ordered += [(q, p, n_pairs + k, False) for k, (p, q) in enumerate(pairs)]
        base_rid = len(roots)
        for p, q, local, positive in ordered:
            values = [zero] * n_cartan
            cart_pos = 0
            for g_idx, (off2, m2, mats2) in enumerate(factor_data):
                for r in range(m2 - 1):
                    if g_idx == f_idx:
                        hmat = mats2[m2 * (m2 - 1) + r]
                        values[cart_pos] = Scalar(hmat[p][p] - hmat[q][q], d=d)
                    cart_pos += 1
            rid = len(roots)
            neg = base_rid + (local + n_pairs) % (2 * n_pairs)
            roots.append(Root(rid, f_idx, tuple(values), positive, neg))
            vec = [zero] * dim
            vec[offset + local] = one
            root_vectors.append(tuple(vec))

    # normalization: a_{-alpha} = f_alpha / kappa(e_alpha, f_alpha)
    fixed_vectors = []
    for r in roots:
        vec = root_vectors[r.rid]
        if r.positive:
            fixed_vectors.append(vec)
        else:
            plus = root_vectors[r.negative_rid]
            pairing = algebra.kappa_of(plus, vec)
            fixed_vectors.append(tuple(c / pairing for c in vec))
    frame = CartanFrame(algebra, roots, fixed_vectors, center_indices)
    return algebra, frame, conjugation


def _det(m: Matrix) -> Scalar:
    n = m.rows
    if n == 0:
        return Scalar.one()
    if n == 1:
        return m[0, 0]
    acc = Scalar.zero()
    for j in range(n):
        if not m[0, j]:
            continue
        minor = Matrix([[m[i, k] for k in range(n) if k != j] for i in range(1, n)])
        term = m[0, j] * _det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def weyl_norm(frame: CartanFrame) -> Scalar:
    """kappa(rho, rho) for the default positive system."""
    rho = frame.weyl
    return frame.algebra.kappa_of(rho, rho)


class TrilinearForm:
    """The Cartan 3-form Lambda(a,b,c) = kappa(a, [b,c]) as an exact table."""

    def __init__(self, algebra: LieAlgebra):
        self.algebra = algebra
        table = {}
        dim = algebra.dim
        for i in range(dim):
            for j in range(i + 1, dim):
                br = algebra.bracket(algebra.basis_vector(i), algebra.basis_vector(j))
                for k in range(j + 1, dim):
                    # Lambda(e_k, e_i, e_j) with cyclic reordering to i<j<k
                    val = algebra.kappa_of(algebra.basis_vector(k), br)
                    if val:
                        table[(i, j, k)] = val
        self.table = table

    def on_basis(self, i: int, j: int, k: int) -> Scalar:
        trip = tuple(sorted((i, j, k)))
        if len(set(trip)) < 3:
            return Scalar.zero(self.algebra.d)
        base = self.table.get(trip)
        if base is None:
            return Scalar.zero(self.algebra.d)
        perm = (i, j, k)
        return base if _perm_sign(perm) > 0 else -base

    def on_vectors(self, a, b, c) -> Scalar:
        return self.algebra.kappa_of(a, self.algebra.bracket(b, c))

    def is_zero(self) -> bool:
        return not self.table


def _perm_sign(perm) -> int:
    sign = 1
    items = list(perm)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def cartan_three_form(algebra: LieAlgebra) -> TrilinearForm:
    return TrilinearForm(algebra)


def dual_basis(algebra: LieAlgebra, s1: Subspace, s2: Subspace):
    """Bases {b_i} of s1 and {b'_j} of s2 with kappa(b_i, b'_j) = delta_ij."""
    if s1.dim != s2.dim:
        raise ValueError("dual_basis needs equal dimensions")
    b1 = [list(v) for v in s1.vectors()]
    b2 = [list(v) for v in s2.vectors()]
    pairing = Matrix([[algebra.kappa_of(u, v) for v in b2] for u in b1])
    try:
        inv = pairing.inverse()
    except ValueError:
        raise ValueError("degenerate kappa pairing between the subspaces")
    out2 = []
    for j in range(len(b2)):
        vec = [Scalar.zero(algebra.d)] * algebra.dim
        for k in range(len(b2)):
            c = inv[k, j]
            if c:
                vec = [a + c * b for a, b in zip(vec, b2[k])]
        out2.append(tuple(vec))
    return [tuple(v) for v in b1], out2
