"""Named group shapes and frozen torus-line presets for the command line.

A group token is a product of comma-separated factors: ``A<k>`` for a
rank-k special unitary factor, ``U1`` for one torus circle, ``T<k>`` for
k of them (``x`` is accepted as an alternative separator).  Presets
attach only to the factor shapes exercised in the test corpus; any
other shape needs explicit torus lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .exactfield import Matrix, Scalar, Subspace, parse_scalar
from .lagrangian import GKPair, gk_pair, samelson
from .liealg import CartanFrame, GroupSpec, LieAlgebra, build

_FACTOR = re.compile(r"^(?:A[1-9]\d*|U1|T[1-9]\d*)$")

PRESET_NAMES = ("canonical", "induced-pair-1", "induced-pair-2")


def parse_group_token(token: str) -> tuple[tuple, int]:
    """Split a token like A1,U1 into simple factors and a torus rank."""
    factors = []
    torus = 0
    for part in re.split(r"[,x]", token):
        if not _FACTOR.match(part):
            raise ValueError(f"unknown group factor {part!r}")
        if part == "U1":
            torus += 1
        elif part[0] == "T":
            torus += int(part[1:])
        else:
            factors.append(("A", int(part[1:])))
    return tuple(factors), torus


def default_field_d(factors) -> int:
    """Radicand the preset torus lines need: A2 roots live over sqrt 3."""
    return 3 if any(k >= 2 for _, k in factors) else 1


def default_center_gram(factors, torus: int, d: int):
    """Identity on a bare torus, scaled to match the simple-factor form
    pairing when both kinds of factor are present."""
    if torus == 0:
        return None
    diag = Scalar.from_rational(8 if factors else 1, d)
    zero = Scalar.zero(d)
    return Matrix([[diag if i == j else zero for j in range(torus)]
                   for i in range(torus)])


@dataclass(frozen=True)
class GroupSetup:
    token: str
    spec: GroupSpec
    algebra: LieAlgebra
    frame: CartanFrame
    conj: object


def build_group(token: str, field_d=None, center_gram=None) -> GroupSetup:
    factors, torus = parse_group_token(token)
    d = default_field_d(factors) if field_d is None else field_d
    if center_gram is None:
        center_gram = default_center_gram(factors, torus, d)
    spec = GroupSpec(factors, torus, center_gram, d)
    algebra, frame, conj = build(spec)
    return GroupSetup(token, spec, algebra, frame, conj)


def parse_basis(text: str, dim: int, d: int) -> list[tuple]:
    """Semicolon-separated vectors of comma-separated scalar literals."""
    vectors = []
    for chunk in text.split(";"):
        comps = chunk.split(",")
        if len(comps) != dim:
            raise ValueError(
                f"vector {chunk!r} has {len(comps)} components, expected {dim}")
        vectors.append(tuple(parse_scalar(c, d) for c in comps))
    return vectors


BOREL_CHOICES = ("standard", "opposite")


def _positive_system(frame: CartanFrame, borel: str):
    if borel == "standard":
        return frame.positive_ids
    if borel == "opposite":
        return tuple(frame.roots[rid].negative_rid
                     for rid in frame.positive_ids)
    raise ValueError(f"unknown borel choice {borel!r}")


def pair_from_vectors(frame: CartanFrame, plus_vectors, minus_vectors,
                      borel: str = "standard") -> GKPair:
    """Pair over a shared positive system; the opposite twist flips the
    system on both sides, staying inside the induced family."""
    dim = frame.algebra.dim
    positive = _positive_system(frame, borel)
    plus = samelson(frame, Subspace.span(dim, plus_vectors), positive)
    minus = samelson(frame, Subspace.span(dim, minus_vectors), positive)
    return gk_pair(plus, minus)


def _preset_lines(factors, torus: int, d: int):
    """Primary and alternate holomorphic torus lines for a known shape."""
    zero = Scalar.zero(d)
    one = Scalar.one(d)
    i_s = Scalar.i(d)
    if factors == () and torus == 2:
        return [(one, i_s)], [(one, -i_s)]
    if factors == (("A", 1),) and torus == 1:
        return [(zero, zero, i_s, -i_s)], [(zero, zero, i_s, i_s)]
    if factors == (("A", 1), ("A", 1)) and torus == 0:
        return ([(zero, zero, i_s, zero, zero, one)],
                [(zero, zero, i_s, zero, zero, -one)])
    if factors == (("A", 2),) and torus == 0:
        if d != 3:
            raise ValueError("the A2 presets need field radicand 3")
        x = Scalar(Fraction(1, 2), 0, 0, Fraction(1, 2), d=3)
        y = Scalar(Fraction(1, 2), 0, 0, Fraction(-1, 2), d=3)
        return [(zero,) * 6 + (x, one)], [(zero,) * 6 + (y, one)]
    raise ValueError(
        "no presets for this group shape; pass explicit torus lines")


def preset_pair(setup: GroupSetup, name: str,
                borel: str = "standard") -> GKPair:
    factors, torus = parse_group_token(setup.token)
    primary, alternate = _preset_lines(factors, torus, setup.algebra.d)
    table = {
        "canonical": (primary, primary),
        "induced-pair-1": (primary, alternate),
        "induced-pair-2": (alternate, primary),
    }
    if name not in table:
        raise ValueError(f"unknown preset {name!r}")
    plus, minus = table[name]
    return pair_from_vectors(setup.frame, plus, minus, borel)
