"""Exact arithmetic over Q(i)[sqrt(d)] and dense linear algebra over it.

Every quantity in this package is a Scalar: a quadruple of rationals
(c0, c1, c2, c3) representing c0 + c1*i + c2*r + c3*i*r with r = sqrt(d)
for a fixed squarefree positive integer d.  d = 1 collapses r to 1, so the
field degenerates to Q(i).  All linear algebra (row reduction, kernels,
subspace lattice) is exact; there are no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Basis product table for (1, i, r, i*r): _MUL[a][b] = (target, sign, carries_d)
_MUL = (
    ((0, 1, False), (1, 1, False), (2, 1, False), (3, 1, False)),
    ((1, 1, False), (0, -1, False), (3, 1, False), (2, -1, False)),
    ((2, 1, False), (3, 1, False), (0, 1, True), (1, 1, True)),
    ((3, 1, False), (2, -1, False), (1, 1, True), (0, -1, True)),
)


def _squarefree(n: int) -> bool:
    if n <= 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class Scalar:
    """Immutable element of Q(i)[sqrt(d)] in canonical lowest-terms form."""

    __slots__ = ("c0", "c1", "c2", "c3", "d")

    def __init__(self, c0=0, c1=0, c2=0, c3=0, d: int = 1):
        if not _squarefree(d):
            raise ValueError(f"d must be a squarefree positive integer, got {d}")
        c0, c1, c2, c3 = Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3)
        if d == 1:
            # sqrt(1) = 1: fold the radical components away so Q(i) is canonical.
            c0, c1, c2, c3 = c0 + c2, c1 + c3, _ZERO, _ZERO
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)
        object.__setattr__(self, "c3", c3)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, value, d: int = 1) -> "Scalar":
        return cls(Fraction(value), 0, 0, 0, d=d)

    @classmethod
    def zero(cls, d: int = 1) -> "Scalar":
        return cls(0, 0, 0, 0, d=d)

    @classmethod
    def one(cls, d: int = 1) -> "Scalar":
        return cls(1, 0, 0, 0, d=d)

    @classmethod
    def i(cls, d: int = 1) -> "Scalar":
        return cls(0, 1, 0, 0, d=d)

    @classmethod
    def sqrt_d(cls, d: int) -> "Scalar":
        if d == 1:
            return cls.one(1)
        return cls(0, 0, 1, 0, d=d)

    # -- structure ---------------------------------------------------------

    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.c0, self.c1, self.c2, self.c3)

    def is_zero(self) -> bool:
        return not (self.c0 or self.c1 or self.c2 or self.c3)

    def is_rational(self) -> bool:
        return not (self.c1 or self.c2 or self.c3)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _join_d(self, other: "Scalar") -> int:
        if self.d == other.d:
            return self.d
        if not (other.c2 or other.c3):
            return self.d
        if not (self.c2 or self.c3):
            return other.d
        raise ValueError(f"cannot mix scalars over d={self.d} and d={other.d}")

    def _coerce(self, value) -> Optional["Scalar"]:
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(value, 0, 0, 0, d=self.d)
        return None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_d(o)
        return Scalar(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3, d=d)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.c0, -self.c1, -self.c2, -self.c3, d=self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_d(o)
        left = [(k, c) for k, c in enumerate(self.components()) if c]
        right = [(k, c) for k, c in enumerate(o.components()) if c]
        acc = [_ZERO, _ZERO, _ZERO, _ZERO]
        for a, ca in left:
            for b, cb in right:
                target, sign, carries_d = _MUL[a][b]
                term = ca * cb
                if carries_d:
                    term *= d
                acc[target] = acc[target] + term if sign > 0 else acc[target] - term
        return Scalar(acc[0], acc[1], acc[2], acc[3], d=d)

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        """Complex conjugation: i -> -i, sqrt(d) -> sqrt(d)."""
        return Scalar(self.c0, -self.c1, self.c2, -self.c3, d=self.d)

    def galois(self) -> "Scalar":
        """The other field involution: sqrt(d) -> -sqrt(d), i fixed."""
        return Scalar(self.c0, self.c1, -self.c2, -self.c3, d=self.d)

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero Scalar")
        # z * conj(z) lies in Q(sqrt(d)); multiply by its Galois conjugate to
        # reach Q, then divide by the rational norm.
        w = self * self.conjugate()
        u, v = w.c0, w.c2
        norm = u * u - self.d * v * v
        if norm == 0:
            raise ZeroDivisionError(f"degenerate norm for {self}")
        inv = self.conjugate() * w.galois()
        return Scalar(inv.c0 / norm, inv.c1 / norm, inv.c2 / norm, inv.c3 / norm, d=self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> "Scalar":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        out = Scalar.one(self.d)
        base = self
        while exponent:
            if exponent & 1:
                out = out * base
            base = base * base
            exponent >>= 1
        return out

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        try:
            self._join_d(o)
        except ValueError:
            return False
        return self.components() == o.components()

    def __hash__(self):
        return hash((self.c0, self.c1, self.c2, self.c3))

    # -- formatting --------------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({self.c0!r}, {self.c1!r}, {self.c2!r}, {self.c3!r}, d={self.d})"


def format_scalar(s: Scalar) -> str:
    """Canonical literal: terms p/q, p/q*i, p/q*r, p/q*i*r in that order."""
    parts = []
    for coeff, unit in zip(s.components(), ("", "i", "r", "i*r")):
        if not coeff:
            continue
        mag = abs(coeff)
        if not unit:
            body = str(mag)
        elif mag == 1:
            body = unit
        else:
            body = f"{mag}*{unit}"
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f"+{body}" if coeff > 0 else f"-{body}")
    return "".join(parts) if parts else "0"


def parse_scalar(text: str, d: int = 1) -> Scalar:
    """Parse the literal grammar emitted by format_scalar.

    Terms are joined by + or -; each term is a rational p/q optionally
    followed by *i, *r, *i*r (bare i, r, i*r also accepted).
    """
    compact = text.replace(" ", "")
    if not compact:
        raise ValueError("empty scalar literal")
    pieces: list[tuple[int, str]] = []
    sign, start = 1, 0
    if compact[0] in "+-":
        sign = -1 if compact[0] == "-" else 1
        start = 1
    current = []
    for ch in compact[start:]:
        if ch in "+-" and current and current[-1] != "/":
            pieces.append((sign, "".join(current)))
            sign = -1 if ch == "-" else 1
            current = []
        else:
            current.append(ch)
    if not current:
        raise ValueError(f"dangling sign in scalar literal {text!r}")
    pieces.append((sign, "".join(current)))

    acc = [_ZERO, _ZERO, _ZERO, _ZERO]
    for sgn, term in pieces:
        factors = term.split("*")
        has_i = has_r = False
        coeff = _ONE
        saw_coeff = False
        for factor in factors:
            if factor == "i":
                if has_i:
                    raise ValueError(f"repeated i in term {term!r}")
                has_i = True
            elif factor == "r":
                if has_r:
                    raise ValueError(f"repeated r in term {term!r}")
                has_r = True
            elif factor:
                if saw_coeff:
                    raise ValueError(f"two coefficients in term {term!r}")
                coeff = Fraction(factor)
                saw_coeff = True
            else:
                raise ValueError(f"empty factor in term {term!r}")
        index = (1 if has_i else 0) + (2 if has_r else 0)
        acc[index] += sgn * coeff
    return Scalar(acc[0], acc[1], acc[2], acc[3], d=d)


class Matrix:
    """Dense immutable matrix of Scalars. All dimensions in scope are small."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[Scalar]]):
        rows = tuple(tuple(row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
        else:
            width = 0
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int, d: int = 1) -> "Matrix":
        one, zero = Scalar.one(d), Scalar.zero(d)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, d: int = 1) -> "Matrix":
        zero = Scalar.zero(d)
        return cls([[zero] * cols for _ in range(rows)])

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.data))) if self.rows else Matrix([[] for _ in range(self.cols)])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")
            tdata = other.transpose().data
            out = []
            for row in self.data:
                live = [(k, a) for k, a in enumerate(row) if a]
                out_row = []
                for col in tdata:
                    acc = None
                    for k, a in live:
                        if col[k]:
                            term = a * col[k]
                            acc = term if acc is None else acc + term
                    out_row.append(acc if acc is not None else Scalar.zero())
                out.append(out_row)
            return Matrix(out)
        if isinstance(other, (Scalar, int, Fraction)):
            return Matrix([[entry * other for entry in row] for row in self.data])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return Matrix([[entry * other for entry in row] for row in self.data])
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        return Matrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (other * Scalar(-1))

    def matvec(self, vec: Sequence[Scalar]) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        live = [(k, v) for k, v in enumerate(vec) if v]
        out = []
        for row in self.data:
            acc = None
            for k, v in live:
                if row[k]:
                    term = row[k] * v
                    acc = term if acc is None else acc + term
            out.append(acc if acc is not None else Scalar.zero())
        return tuple(out)

    def is_zero(self) -> bool:
        return all(not entry for row in self.data for entry in row)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(row) + list(Matrix.identity(n).data[i]) for i, row in enumerate(self.data)]
        reduced, _, pivots = _rref_rows(aug)
        if list(pivots[:n]) != list(range(n)):
            raise ValueError("singular matrix")
        return Matrix([row[n:] for row in reduced])

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.data)
        return f"Matrix[{self.rows}x{self.cols}: {body}]"


def _rref_rows(rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], int, list[int]]:
    """In-place reduced row echelon form. Deterministic leftmost pivots:
    scan columns left to right, take the topmost unused row with a nonzero
    entry. Returns (rows, rank, pivot_columns)."""
    if not rows:
        return rows, 0, []
    n_rows, n_cols = len(rows), len(rows[0])
    pivots: list[int] = []
    pivot_row = 0
    for col in range(n_cols):
        if pivot_row >= n_rows:
            break
        found = None
        for r in range(pivot_row, n_rows):
            if rows[r][col]:
                found = r
                break
        if found is None:
            continue
        rows[pivot_row], rows[found] = rows[found], rows[pivot_row]
        inv = rows[pivot_row][col].inverse()
        rows[pivot_row] = [entry * inv for entry in rows[pivot_row]]
        for r in range(n_rows):
            if r != pivot_row and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    return rows, len(pivots), pivots


def rref(matrix: Matrix) -> tuple[Matrix, int, tuple[int, ...]]:
    rows = [list(r) for r in matrix.data]
    reduced, rank, pivots = _rref_rows(rows)
    return Matrix(reduced), rank, tuple(pivots)


def rank(matrix: Matrix) -> int:
    return rref(matrix)[1]


def kernel(matrix: Matrix) -> "Subspace":
    """Exact null space of matrix (as row vectors x with M x = 0)."""
    reduced, _, pivots = rref(matrix)
    n = matrix.cols
    pivot_set = set(pivots)
    free_cols = [c for c in range(n) if c not in pivot_set]
    basis = []
    for free in free_cols:
        vec = [Scalar.zero() for _ in range(n)]
        vec[free] = Scalar.one()
        for row_idx, pivot_col in enumerate(pivots):
            entry = reduced.data[row_idx][free]
            if entry:
                vec[pivot_col] = -entry
        basis.append(vec)
    return Subspace.span(n, basis)


class Subspace:
    """Subspace of a coordinate space, held as a canonical RREF basis matrix.

    Equality of subspaces is literal equality of the canonical matrices.
    """

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, basis: Matrix, pivots: tuple[int, ...]):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", pivots)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[Sequence[Scalar]]) -> "Subspace":
        rows = [list(v) for v in vectors]
        for row in rows:
            if len(row) != ambient:
                raise ValueError("vector length does not match ambient dimension")
        reduced, rank_, pivots = _rref_rows(rows)
        return cls(ambient, Matrix(reduced[:rank_]), tuple(pivots))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls.span(ambient, [])

    @classmethod
    def full(cls, ambient: int, d: int = 1) -> "Subspace":
        return cls.span(ambient, Matrix.identity(ambient, d).data)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> tuple:
        return self.basis.data

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"

    def contains_vector(self, vec: Sequence[Scalar]) -> bool:
        coords = self.coordinates(vec)
        return coords is not None

    def coordinates(self, vec: Sequence[Scalar]) -> Optional[tuple]:
        """Coefficients of vec over the canonical basis, or None if outside."""
        if len(vec) != self.ambient:
            raise ValueError("vector length does not match ambient dimension")
        coords = [vec[p] for p in self.pivots]
        residual = list(vec)
        for coeff, row in zip(coords, self.basis.data):
            if coeff:
                residual = [a - coeff * b for a, b in zip(residual, row)]
        if any(residual):
            return None
        return tuple(coords)

    def contains(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return all(self.contains_vector(v) for v in other.vectors())

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return Subspace.span(self.ambient, list(self.vectors()) + list(other.vectors()))

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        # Kernel of the stacked coefficient matrix: rows (u, v) with
        # u . basis_self - v . basis_other = 0 give intersection vectors.
        stacked = Matrix(
            [list(col) for col in zip(*(list(self.basis.data) + [
                [-e for e in row] for row in other.basis.data]))]
        )
        coeffs = kernel(stacked)
        vectors = []
        for coeff_vec in coeffs.vectors():
            u = coeff_vec[: self.dim]
            vec = [Scalar.zero() for _ in range(self.ambient)]
            for c, row in zip(u, self.basis.data):
                if c:
                    vec = [a + c * b for a, b in zip(vec, row)]
            vectors.append(vec)
        return Subspace.span(self.ambient, vectors)

    def complement_in(self, other: "Subspace") -> "Subspace":
        """Deterministic complement: self + result = other, direct.

        Greedy over other's canonical basis vectors in order.
        """
        if not other.contains(self):
            raise ValueError("complement_in requires containment")
        current = list(self.vectors())
        picked = []
        current_rank = self.dim
        for v in other.vectors():
            candidate = current + [list(v)]
            reduced, rank_, _ = _rref_rows([list(r) for r in candidate])
            if rank_ > current_rank:
                current = candidate
                current_rank = rank_
                picked.append(v)
        if current_rank != other.dim:
            raise AssertionError("complement construction failed")
        return Subspace.span(self.ambient, picked)


def is_eigenvector(op: Matrix, vec: Sequence[Scalar]) -> Optional[Scalar]:
    """Return the exact eigenvalue if op maps vec to a multiple of it."""
    if all(not v for v in vec):
        raise ValueError("zero vector has no eigenvalue")
    image = op.matvec(vec)
    lead = next(k for k, v in enumerate(vec) if v)
    lam = image[lead] / vec[lead]
    if all(img == lam * v for img, v in zip(image, vec)):
        return lam
    return None
