"""Clifford algebra Cl(g, kappa) with exact normal-ordered arithmetic.

Monomials are bitsets over the coordinate basis of g, stored sparsely as
mask -> Scalar maps with no explicit zeros.  Multivector and Form wedge;
CliffordElement multiplies through the relation x y + y x = 2 kappa(x, y),
normal-ordering against an arbitrary symmetric Gram matrix.  Pairwise
monomial products are memoized per algebra; the memo is a plain dict, so
concurrent fills are benign last-write-wins races over identical values.

The graded commutator is [x, u] = x u - (-1)^|u| u x throughout; the
Clifford differential is a quarter of it against the cubic element
theta = q(Lambda).
"""

from __future__ import annotations

import hashlib
import json
import struct
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .exactfield import Matrix, Scalar, rank
from .liealg import LieAlgebra, cartan_three_form

Vector = tuple


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _wedge_sign(a: int, b: int) -> int:
    """Sign of merging two disjoint increasing monomials, -1 power of the
    number of transpositions."""
    swaps = 0
    for j in _bits(b):
        swaps += bin(a >> (j + 1)).count("1")
    return -1 if swaps % 2 else 1


def _memo(algebra: LieAlgebra) -> dict:
    memo = getattr(algebra, "_cl_memo", None)
    if memo is None:
        memo = {"gen": {}, "pair": {}, "q": {}, "theta": None}
        algebra._cl_memo = memo
    return memo


class _Sparse:
    """Shared sparse-map structure for the three graded element kinds."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: LieAlgebra, terms: Optional[dict] = None):
        self.algebra = algebra
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, {})

    @classmethod
    def one(cls, algebra):
        return cls(algebra, {0: Scalar.one(algebra.d)})

    @classmethod
    def scalar(cls, algebra, value):
        return cls(algebra, {0: Scalar.one(algebra.d) * value})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def grades(self) -> tuple:
        return tuple(sorted({bin(m).count("1") for m in self.terms}))

    def grade_part(self, k: int):
        return type(self)(self.algebra, {
            m: c for m, c in self.terms.items() if bin(m).count("1") == k})

    def parity_part(self, parity: int):
        return type(self)(self.algebra, {
            m: c for m, c in self.terms.items()
            if bin(m).count("1") % 2 == parity})

    def scalar_part(self) -> Scalar:
        return self.terms.get(0, Scalar.zero(self.algebra.d))

    def top_grade(self) -> int:
        return max((bin(m).count("1") for m in self.terms), default=0)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return type(self)(self.algebra, out)

    def __neg__(self):
        return type(self)(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def _scaled(self, value):
        if not value:
            return type(self)(self.algebra, {})
        return type(self)(self.algebra,
                          {m: c * value for m, c in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self._scaled(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            one = Scalar.one(self.algebra.d)
            return self._scaled(one / other)
        return NotImplemented

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.algebra), frozenset(self.terms.items())))

    def _label(self, mask: int, dual: bool) -> str:
        if mask == 0:
            return "1"
        mark = "*" if dual else ""
        return "".join(f"{self.algebra.labels[i]}{mark}" for i in _bits(mask))

    def __repr__(self):
        if not self.terms:
            return "0"
        dual = isinstance(self, Form)
        parts = [f"({c})*{self._label(m, dual)}" if m else f"({c})"
                 for m, c in sorted(self.terms.items())]
        return " + ".join(parts)


def _wedge_terms(algebra, left: dict, right: dict, cls):
    out = {}
    for a, ca in left.items():
        for b, cb in right.items():
            if a & b:
                continue
            m = a | b
            c = ca * cb
            if _wedge_sign(a, b) < 0:
                c = -c
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return cls(algebra, out)


class Multivector(_Sparse):
    """Element of the exterior algebra of g; * is the wedge product."""

    @classmethod
    def from_vector(cls, algebra, vec: Sequence[Scalar]):
        return cls(algebra, {1 << i: c for i, c in enumerate(vec) if c})

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return _wedge_terms(self.algebra, self.terms, other.terms,
                                Multivector)
        if isinstance(other, (int, Fraction, Scalar)):
            return self._scaled(other)
        return NotImplemented


class Form(_Sparse):
    """Element of the exterior algebra of g*; * is the wedge product."""

    @classmethod
    def from_covector(cls, algebra, values: Sequence[Scalar]):
        return cls(algebra, {1 << i: c for i, c in enumerate(values) if c})

    def __mul__(self, other):
        if isinstance(other, Form):
            return _wedge_terms(self.algebra, self.terms, other.terms, Form)
        if isinstance(other, (int, Fraction, Scalar)):
            return self._scaled(other)
        return NotImplemented


def contract(element, values: Sequence[Scalar]):
    """Interior product by the covector with the given basis values.

    Works on any of the sparse kinds; for Form arguments the values are
    components of a g-vector paired tautologically.
    """
    algebra = element.algebra
    out = {}
    for mask, coeff in element.terms.items():
        sign_flip = False
        for pos, i in enumerate(_bits(mask)):
            v = values[i]
            if not v:
                continue
            c = coeff * v
            if pos % 2:
                c = -c
            m = mask ^ (1 << i)
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return type(element)(algebra, out)


class CliffordElement(_Sparse):
    """Element of Cl(g, kappa) in normal-ordered form; * is Clifford."""

    @classmethod
    def from_vector(cls, algebra, vec: Sequence[Scalar]):
        return cls(algebra, {1 << i: c for i, c in enumerate(vec) if c})

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return cl_mul(self, other)
        if isinstance(other, (int, Fraction, Scalar)):
            return self._scaled(other)
        return NotImplemented


def _gen_mul(algebra, i: int, mask: int) -> dict:
    """e_i times the ordered monomial, via x y = 2 kappa(x,y) - y x."""
    memo = _memo(algebra)["gen"]
    key = (i, mask)
    cached = memo.get(key)
    if cached is not None:
        return cached
    gram = algebra.kappa
    one = Scalar.one(algebra.d)
    two = one + one
    out = {}
    sign = one
    placed = False
    for j in _bits(mask):
        if i < j:
            out[mask | (1 << i)] = sign
            placed = True
            break
        if i == j:
            c = sign * gram[i, i]
            if c:
                out[mask ^ (1 << j)] = c
            placed = True
            break
        c = sign * two * gram[i, j]
        if c:
            m = mask ^ (1 << j)
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        sign = -sign
    if not placed:
        out[mask | (1 << i)] = sign
    memo[key] = out
    return out


def _mono_mul(algebra, a: int, b: int) -> dict:
    """Product of two ordered monomials as a mask -> Scalar map."""
    if a == 0:
        return {b: Scalar.one(algebra.d)}
    memo = _memo(algebra)["pair"]
    key = (a, b)
    cached = memo.get(key)
    if cached is not None:
        return cached
    i = a.bit_length() - 1
    rest = a ^ (1 << i)
    first = _gen_mul(algebra, i, b)
    if rest == 0:
        memo[key] = first
        return first
    out = {}
    for m, c in first.items():
        for m2, c2 in _mono_mul(algebra, rest, m).items():
            s = out.get(m2)
            cc = c * c2
            s = cc if s is None else s + cc
            if s:
                out[m2] = s
            else:
                out.pop(m2, None)
    memo[key] = out
    return out


def cl_mul(u: CliffordElement, v: CliffordElement) -> CliffordElement:
    if u.algebra is not v.algebra:
        raise ValueError("elements live in different algebras")
    algebra = u.algebra
    out = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            coeff = ca * cb
            for m, c in _mono_mul(algebra, a, b).items():
                s = out.get(m)
                cc = coeff * c
                s = cc if s is None else s + cc
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
    return CliffordElement(algebra, out)


def _q_mask(algebra, mask: int) -> dict:
    """Quantized monomial: the (1/k!) signed sum over permutation products,
    evaluated by grouping permutations on their leading factor."""
    memo = _memo(algebra)["q"]
    cached = memo.get(mask)
    if cached is not None:
        return cached
    if mask == 0:
        out = {0: Scalar.one(algebra.d)}
        memo[mask] = out
        return out
    k = bin(mask).count("1")
    inv_k = Scalar.one(algebra.d) / k
    out = {}
    for pos, i in enumerate(_bits(mask)):
        sub = _q_mask(algebra, mask ^ (1 << i))
        factor = -inv_k if pos % 2 else inv_k
        for m, c in sub.items():
            coeff = c * factor
            for m2, c2 in _gen_mul(algebra, i, m).items():
                s = out.get(m2)
                cc = coeff * c2
                s = cc if s is None else s + cc
                if s:
                    out[m2] = s
                else:
                    out.pop(m2, None)
    memo[mask] = out
    return out


def quantize(v: Multivector) -> CliffordElement:
    algebra = v.algebra
    out = {}
    for mask, coeff in v.terms.items():
        for m, c in _q_mask(algebra, mask).items():
            s = out.get(m)
            cc = coeff * c
            s = cc if s is None else s + cc
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return CliffordElement(algebra, out)


def dequantize(u: CliffordElement) -> Multivector:
    """Inverse of quantize, peeling grades from the top down."""
    algebra = u.algebra
    remaining = dict(u.terms)
    collected = {}
    while remaining:
        top = max(bin(m).count("1") for m in remaining)
        layer = {m: c for m, c in remaining.items()
                 if bin(m).count("1") == top}
        collected.update(layer)
        for mask, coeff in layer.items():
            for m, c in _q_mask(algebra, mask).items():
                s = remaining.get(m)
                cc = coeff * c
                s = -cc if s is None else s - cc
                if s:
                    remaining[m] = s
                else:
                    remaining.pop(m, None)
    return Multivector(algebra, collected)


def mu(algebra: LieAlgebra) -> Multivector:
    """The ordered wedge of the whole basis."""
    return Multivector(algebra, {(1 << algebra.dim) - 1: Scalar.one(algebra.d)})


def star(alpha: Form, top: Optional[Multivector] = None) -> Multivector:
    """alpha -> iota chain into mu, leftmost dual factor applied last."""
    algebra = alpha.algebra
    if top is None:
        top = mu(algebra)
    out = Multivector.zero(algebra)
    for mask, coeff in alpha.terms.items():
        piece = top
        for i in reversed(list(_bits(mask))):
            values = [Scalar.one(algebra.d) if j == i else Scalar.zero(algebra.d)
                      for j in range(algebra.dim)]
            piece = contract(piece, values)
        out = out + coeff * piece
    return out


def star_inv(v: Multivector, top: Optional[Multivector] = None) -> Form:
    algebra = v.algebra
    full = (1 << algebra.dim) - 1
    out = {}
    for mask, coeff in v.terms.items():
        pre = full ^ mask
        image = star(Form(algebra, {pre: Scalar.one(algebra.d)}), top)
        factor = image.terms[mask]
        out[pre] = coeff / factor
    return Form(algebra, out)


def kappa_star(algebra: LieAlgebra, ahat) -> tuple:
    """(a, a') -> (a' - a, kappa(a) + kappa(a')), vector and covector."""
    a, ap = ahat
    vec = tuple(y - x for x, y in zip(a, ap))
    total = tuple(x + y for x, y in zip(a, ap))
    cov = tuple(algebra.kappa_covector(total))
    return vec, cov


def spinor_action(ahat, u: CliffordElement) -> CliffordElement:
    """(a, a') acting by a' u - (-1)^|u| u a, parity by parity."""
    algebra = u.algebra
    a, ap = ahat
    left = CliffordElement.from_vector(algebra, ap)
    right = CliffordElement.from_vector(algebra, a)
    even = u.parity_part(0)
    odd = u.parity_part(1)
    out = cl_mul(left, u)
    if even:
        out = out - cl_mul(even, right)
    if odd:
        out = out + cl_mul(odd, right)
    return out


def graded_commutator(x: CliffordElement, u: CliffordElement) -> CliffordElement:
    """[x, u] = x u - (-1)^|u| u x, componentwise on the parity of u."""
    even = u.parity_part(0)
    odd = u.parity_part(1)
    out = cl_mul(x, u)
    if even:
        out = out - cl_mul(even, x)
    if odd:
        out = out + cl_mul(odd, x)
    return out


def theta(algebra: LieAlgebra) -> CliffordElement:
    """The cubic element q(Lambda), built over the kappa-dual basis."""
    memo = _memo(algebra)
    if memo["theta"] is not None:
        return memo["theta"]
    lam = cartan_three_form(algebra)
    dual = algebra.kappa_dual_basis()
    n = algebra.dim
    terms = {}
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                coeff = lam.on_vectors(dual[a], dual[b], dual[c])
                if coeff:
                    terms[(1 << a) | (1 << b) | (1 << c)] = coeff
    result = quantize(Multivector(algebra, terms))
    memo["theta"] = result
    return result


def d_cl(u: CliffordElement) -> CliffordElement:
    """Quarter graded commutator with theta."""
    th = theta(u.algebra)
    if th.is_zero():
        return CliffordElement.zero(u.algebra)
    quarter = Scalar(Fraction(1, 4), d=u.algebra.d)
    return quarter * graded_commutator(th, u)


def tau_prime(algebra: LieAlgebra, a: Sequence[Scalar]) -> CliffordElement:
    """Quadratic spin generator (1/4) sum [a, e_i] e^i."""
    dual = algebra.kappa_dual_basis()
    quarter = Scalar(Fraction(1, 4), d=algebra.d)
    out = CliffordElement.zero(algebra)
    for i in range(algebra.dim):
        lhs = CliffordElement.from_vector(
            algebra, algebra.bracket(a, algebra.basis_vector(i)))
        rhs = CliffordElement.from_vector(algebra, dual[i])
        out = out + cl_mul(lhs, rhs)
    return quarter * out


def dcl_cohomology(algebra: LieAlgebra) -> tuple:
    """(even, odd) homology dims of d_cl by exact rank computation."""
    if algebra.dim > 8:
        raise ValueError("Clifford dimension bound 256 exceeded")
    masks = {0: [], 1: []}
    for m in range(1 << algebra.dim):
        masks[bin(m).count("1") % 2].append(m)
    index = {p: {m: i for i, m in enumerate(masks[p])} for p in (0, 1)}
    ranks = {}
    for p in (0, 1):
        cols = []
        for m in masks[p]:
            image = d_cl(CliffordElement(
                algebra, {m: Scalar.one(algebra.d)}))
            col = [Scalar.zero(algebra.d)] * len(masks[1 - p])
            for m2, c in image.terms.items():
                col[index[1 - p][m2]] = c
            cols.append(col)
        ranks[p] = rank(Matrix([[cols[j][i] for j in range(len(cols))]
                                for i in range(len(masks[1 - p]))]))
    h_even = len(masks[0]) - ranks[0] - ranks[1]
    h_odd = len(masks[1]) - ranks[1] - ranks[0]
    return h_even, h_odd


def cache_digest(algebra: LieAlgebra) -> str:
    """Content digest of the structure constants, Gram and field tag."""
    h = hashlib.sha256()
    h.update(str(algebra.d).encode())
    for row in algebra.kappa.data:
        for entry in row:
            h.update(repr(entry.components()).encode())
    for row in algebra.bracket_table:
        for entry in row:
            for s in entry:
                h.update(repr(s.components()).encode())
    return h.hexdigest()


_CACHE_MAGIC = b"GKCL1\n"


def _scalar_to_ints(s: Scalar) -> list:
    out = []
    for frac in s.components():
        out.append(frac.numerator)
        out.append(frac.denominator)
    return out


def _scalar_from_ints(vals, d: int) -> Scalar:
    parts = [Fraction(vals[k], vals[k + 1]) for k in range(0, 8, 2)]
    return Scalar(*parts, d=d)


def save_product_cache(algebra: LieAlgebra, directory) -> Path:
    """Write the memoized pair-product table as length-prefixed records."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{cache_digest(algebra)}.bin"
    pair = _memo(algebra)["pair"]
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<I", len(pair)))
        for (a, b), table in sorted(pair.items()):
            payload = json.dumps(
                [[m] + _scalar_to_ints(c) for m, c in sorted(table.items())]
            ).encode()
            fh.write(struct.pack("<QQI", a, b, len(payload)))
            fh.write(payload)
    return path


def load_product_cache(algebra: LieAlgebra, directory) -> bool:
    """Pre-fill the pair-product memo from disk; False when absent."""
    path = Path(directory) / f"{cache_digest(algebra)}.bin"
    if not path.exists():
        return False
    pair = _memo(algebra)["pair"]
    with open(path, "rb") as fh:
        if fh.read(len(_CACHE_MAGIC)) != _CACHE_MAGIC:
            raise ValueError("unrecognized cache file header")
        (count,) = struct.unpack("<I", fh.read(4))
        for _ in range(count):
            a, b, size = struct.unpack("<QQI", fh.read(20))
            rows = json.loads(fh.read(size).decode())
            pair[(a, b)] = {row[0]: _scalar_from_ints(row[1:], algebra.d)
                            for row in rows}
    return True
