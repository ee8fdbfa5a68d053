"""Registry of named verification checks run by the command line tool.

Every check receives a shared context (one group, one Lagrangian pair)
and either returns a witness string, raises CheckFailure with the
offending data, or raises Skipped when its hypothesis does not apply.
Expensive intermediates (spinors, the bigraded decomposition) are built
once per context and reused.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb

from .clifford import (CliffordElement, Multivector, contract, d_cl,
                       dcl_cohomology, cl_mul, kappa_star, quantize,
                       spinor_action, tau_prime, theta)
from .cohomology import (ce_cohomology, e1_page, e2_page, kunneth,
                         picard_report, total_cohomology)
from .exactfield import Scalar, Subspace, format_scalar
from .genkahler import (build_pure_spinor, degree_canonical, graded_dcl,
                        hodge_grid, torus_restriction_check, type_of,
                        verify_dcl_spinor)
from .lagrangian import (BDTriple, Double, enumerate_bd, evens_lu,
                         simple_root_ids, split_classify)
from .presets import GroupSetup


class CheckFailure(Exception):
    """The verified statement is false; the message is the witness."""


class Skipped(Exception):
    """The check's hypothesis does not apply to this configuration."""


@dataclass(frozen=True)
class CheckResult:
    name: str
    anchor: str
    status: str
    witness: str
    elapsed: float


@dataclass
class CheckContext:
    setup: GroupSetup
    pair: object
    _cache: dict = field(default_factory=dict)

    def spinor(self, side: str):
        key = ("spinor", side)
        if key not in self._cache:
            self._cache[key] = build_pure_spinor(self.pair, side)
        return self._cache[key]

    def grid(self):
        if "grid" not in self._cache:
            self._cache["grid"] = hodge_grid(self.pair)
        return self._cache["grid"]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailure(message)


def _check_samelson(ctx: CheckContext) -> str:
    algebra = ctx.setup.algebra
    dims = []
    for half in (ctx.pair.l_plus, ctx.pair.l_minus):
        sub = half.subspace
        for u in sub.vectors():
            for v in sub.vectors():
                _require(sub.contains_vector(algebra.bracket(u, v)),
                         "subalgebra is not closed under the bracket")
                _require(not algebra.kappa_of(u, v),
                         "subalgebra is not isotropic")
        _require(2 * sub.dim == algebra.dim,
                 f"half dimension {sub.dim} in ambient {algebra.dim}")
        dims.append(sub.dim)
    return f"two isotropic subalgebras of dimension {dims[0]}"


def _check_bd_enumeration(ctx: CheckContext) -> str:
    frame = ctx.setup.frame
    simple = simple_root_ids(frame)
    if len(simple) > 3:
        raise Skipped("enumeration bounded at three simple roots")
    triples = enumerate_bd(frame)
    from .lagrangian import _is_isometry
    from itertools import combinations, permutations
    listed = {(t.p, t.p_prime, t.pi) for t in triples}
    for size in range(len(simple) + 1):
        for p in combinations(simple, size):
            for p_prime in combinations(simple, size):
                for image in permutations(p_prime):
                    candidate = BDTriple(p, p_prime, image)
                    ok = _is_isometry(frame, candidate)
                    member = (p, p_prime, image) in listed
                    _require(ok == member,
                             f"triple {p}->{image} listed={member} "
                             f"isometry={ok}")
    return f"{len(triples)} triples, all and only the isometries"


def _check_evens_lu(ctx: CheckContext) -> str:
    frame = ctx.setup.frame
    algebra = ctx.setup.algebra
    double = Double(algebra)
    cartan = frame.cartan.sum(frame.center)
    diagonal = Subspace.span(
        double.dim, [tuple(v) + tuple(v) for v in cartan.vectors()])
    standard = evens_lu(frame, BDTriple((), (), ()), diagonal)
    _require(standard.subspace.dim == algebra.dim,
             "standard Lagrangian has wrong dimension")
    for big, left_half, right_half in (
            (ctx.pair.L_plus, ctx.pair.l_minus.subspace,
             ctx.pair.l_plus.subspace),
            (ctx.pair.L_minus,
             algebra.conjugation.apply_subspace(ctx.pair.l_minus.subspace),
             ctx.pair.l_plus.subspace)):
        result = split_classify(big)
        _require(result.is_split, "pair Lagrangian does not split")
        _require(result.left == left_half and result.right == right_half,
                 "split does not recover the defining halves")
        _require(result.gc_flag, "pair Lagrangian meets the compact pair")
    return "splits recover both halves; standard Lagrangian validates"


def _check_d_squared(ctx: CheckContext) -> str:
    algebra = ctx.setup.algebra
    one = Scalar.one(algebra.d)
    for mask in range(1 << algebra.dim):
        u = CliffordElement(algebra, {mask: one})
        _require(d_cl(d_cl(u)).is_zero(),
                 f"d_cl squared is nonzero on monomial {mask:b}")
    return f"zero on all {1 << algebra.dim} monomials"


def _check_quantize_equivariance(ctx: CheckContext) -> str:
    algebra = ctx.setup.algebra
    if algebra.dim > 6:
        raise Skipped("sweep bounded at dimension 6")
    zero = algebra.zero_vector()
    one = Scalar.one(algebra.d)
    hats = [(algebra.basis_vector(i), zero) for i in range(algebra.dim)]
    hats += [(zero, algebra.basis_vector(i)) for i in range(algebra.dim)]
    count = 0
    for ahat in hats:
        vec, cov = kappa_star(algebra, ahat)
        x_mv = Multivector.from_vector(algebra, vec)
        for mask in range(1 << algebra.dim):
            v = Multivector(algebra, {mask: one})
            lhs = quantize(x_mv * v + contract(v, cov))
            rhs = spinor_action(ahat, quantize(v))
            _require(lhs == rhs,
                     f"mismatch at generator {ahat} monomial {mask:b}")
            count += 1
    return f"{count} generator/monomial cases"


def _check_spin_homomorphism(ctx: CheckContext) -> str:
    algebra = ctx.setup.algebra
    taus = [tau_prime(algebra, algebra.basis_vector(i))
            for i in range(algebra.dim)]
    for i in range(algebra.dim):
        a = algebra.basis_vector(i)
        for j in range(algebra.dim):
            b = algebra.basis_vector(j)
            bracket = algebra.bracket(a, b)
            lhs = tau_prime(algebra, bracket)
            rhs = cl_mul(taus[i], taus[j]) - cl_mul(taus[j], taus[i])
            _require(lhs == rhs, f"tau' fails on basis pair ({i},{j})")
            acting = cl_mul(taus[i], CliffordElement.from_vector(algebra, b)) \
                - cl_mul(CliffordElement.from_vector(algebra, b), taus[i])
            _require(acting == CliffordElement.from_vector(algebra, bracket),
                     f"tau' action fails on basis pair ({i},{j})")
    return f"homomorphism and action on all {algebra.dim ** 2} basis pairs"


def _check_twisted_cohomology(ctx: CheckContext) -> str:
    algebra = ctx.setup.algebra
    h_even, h_odd = dcl_cohomology(algebra)
    if theta(algebra).is_zero():
        half = 1 << (algebra.dim - 1)
        _require((h_even, h_odd) == (half, half),
                 f"abelian twisted cohomology ({h_even},{h_odd})")
    else:
        _require((h_even, h_odd) == (0, 0),
                 f"twisted cohomology ({h_even},{h_odd}) is nonzero")
    return f"({h_even}, {h_odd})"


def _check_pure_spinor(ctx: CheckContext) -> str:
    algebra = ctx.setup.algebra
    conj = algebra.conjugation
    double = Double(algebra)
    types = []
    for side in ("plus", "minus"):
        u = ctx.spinor(side)
        lead = conj.apply_subspace(ctx.pair.l_plus.subspace)
        trail = conj.apply_subspace(ctx.pair.l_minus.subspace) \
            if side == "plus" else ctx.pair.l_minus.subspace
        _require(u.annihilator == double.box(trail, lead),
                 f"annihilator mismatch on side {side}")
        _require(u.annihilator.dim == algebra.dim,
                 f"annihilator dimension {u.annihilator.dim}")
        overlap = lead.intersect(trail)
        t = type_of(u)
        _require(t % 2 == overlap.dim % 2,
                 f"type {t} breaks parity with overlap {overlap.dim}")
        types.append(t)
    return f"types ({types[0]}, {types[1]}), annihilators match"


def _check_dcl_spinor(ctx: CheckContext) -> str:
    report = verify_dcl_spinor(ctx.pair)
    for name, ok, _ in report.entries:
        _require(ok, f"identity failed: {name}")
    return f"{len(report.entries)} differential identities"


def _check_cy_dichotomy(ctx: CheckContext) -> str:
    algebra = ctx.setup.algebra
    u = ctx.spinor("plus")
    flat = theta(algebra).is_zero()
    closed = d_cl(u.element).is_zero()
    _require(flat == closed,
             f"theta zero is {flat} but d u_+ zero is {closed}")
    return "flat and closed" if flat else "curved and non-closed"


def _check_degree(ctx: CheckContext) -> str:
    values = []
    for side in ("plus_metric", "minus_metric"):
        report = degree_canonical(ctx.pair, side)
        expected = Scalar.from_rational(-2, ctx.setup.algebra.d) \
            * report.kappa_rho
        _require(report.degree == expected,
                 f"degree {format_scalar(report.degree)} on {side}")
        values.append(report.degree)
    _require(values[0] == values[1], "metric sides disagree")
    return f"degree {format_scalar(values[0])} on both metric sides"


def _check_hodge_grid(ctx: CheckContext) -> str:
    grid = ctx.grid()
    algebra = ctx.setup.algebra
    n = algebra.dim // 2
    total = sum(cell.dim for cell in grid.cells.values())
    _require(total == 1 << algebra.dim, f"cells total {total}")
    for (r, s), cell in grid.cells.items():
        p = (r + s + n) // 2
        q = (r - s + n) // 2
        _require(cell.dim == comb(n, p) * comb(n, q),
                 f"cell ({r},{s}) has dimension {cell.dim}")
    u = ctx.spinor("plus")
    _require(grid.cells[(-n, 0)].contains_vector(
        _as_coordinates(algebra, u.element)),
        "u_+ is not in the corner cell")
    return f"{len(grid.cells)} cells, dimensions binomial, corner holds u_+"


def _as_coordinates(algebra, element: CliffordElement) -> tuple:
    zero = Scalar.zero(algebra.d)
    coords = [zero] * (1 << algebra.dim)
    for mask, c in element.terms.items():
        coords[mask] = c
    return tuple(coords)


def _check_graded_differential(ctx: CheckContext) -> str:
    report = graded_dcl(ctx.grid())
    _require(not report.residual_failures,
             f"residuals in cells {sorted(report.residual_failures)}")
    _require(not report.square_failures,
             f"square components in {sorted(report.square_failures)}")
    allowed = {(1, 1), (1, -1)}
    _require(set(report.spinor_arrows) <= allowed,
             f"spinor arrows {sorted(report.spinor_arrows)}")
    return f"{report.cells_checked} cells, arrows " \
        f"{sorted(report.spinor_arrows)}"


def _check_torus_restriction(ctx: CheckContext) -> str:
    if not ctx.pair.canonical:
        raise Skipped("only the canonical pair restricts to the torus")
    _require(torus_restriction_check(ctx.pair), "restriction mismatch")
    return "restricted complex structures agree with the torus pair"


def _check_spectral_e2(ctx: CheckContext) -> str:
    page = e2_page(e1_page(ctx.pair))
    r = page.rank_half
    for (p, q), dim in page.e2_dims.items():
        _require(dim == comb(r, p) * comb(r, q),
                 f"E2({p},{q}) has dimension {dim}")
    other = e2_page(e1_page(ctx.pair, side="minus"))
    _require(sum(other.e2_dims.values()) == sum(page.e2_dims.values()),
             "sides give different second pages")
    return f"second page is the rank-{r} torus grid on both sides"


def _check_total_cohomology(ctx: CheckContext) -> str:
    algebra = ctx.setup.algebra
    conj = algebra.conjugation
    total = total_cohomology(ctx.pair)
    r = len(algebra.cartan_indices) // 2
    expected = tuple(comb(2 * r, k) for k in range(len(total)))
    _require(total == expected, f"total dimensions {total}")
    page = e2_page(e1_page(ctx.pair))
    by_degree = {}
    for (p, q), dim in page.e2_dims.items():
        by_degree[p + q] = by_degree.get(p + q, 0) + dim
    for k, dim in enumerate(total):
        _require(by_degree.get(k, 0) == dim,
                 f"second page disagrees with total in degree {k}")
    left = ce_cohomology(
        algebra, conj.apply_subspace(ctx.pair.l_minus.subspace))
    right = ce_cohomology(
        algebra, conj.apply_subspace(ctx.pair.l_plus.subspace))
    _require(kunneth(left, right) == total,
             "total does not factor through the halves")
    return f"binomials of {2 * r} in every degree"


def _check_picard(ctx: CheckContext) -> str:
    report = picard_report(ctx.pair)
    _require(report.consistent,
             f"rank {report.rank_half}, h1 {report.h1_plus}, "
             f"tangent {report.tangent_dim}")
    return f"rank {report.rank_half}, tangent dimension {report.tangent_dim}"


REGISTRY = {
    "lem.samelson": (
        "each half is a middle-dimensional isotropic subalgebra",
        _check_samelson),
    "prop.bd-enumeration": (
        "the listed triples are exactly the isometric bijections",
        _check_bd_enumeration),
    "cor.evens-lu": (
        "pair Lagrangians split back into their defining halves",
        _check_evens_lu),
    "cl.d-squared": (
        "the twisted differential squares to zero",
        _check_d_squared),
    "cl.quantize-equivariance": (
        "quantization intertwines the double action",
        _check_quantize_equivariance),
    "cl.spin-homomorphism": (
        "the quadratic spin generators represent the bracket",
        _check_spin_homomorphism),
    "cl.twisted-cohomology": (
        "twisted cohomology vanishes exactly when theta is nonzero",
        _check_twisted_cohomology),
    "lem.pure-spinor": (
        "spinor annihilators are the conjugated pair Lagrangians",
        _check_pure_spinor),
    "prop.dcl-spinor": (
        "the three spinor differential identities hold",
        _check_dcl_spinor),
    "cor.cy-dichotomy": (
        "the plus spinor is closed exactly in the flat case",
        _check_cy_dichotomy),
    "thm.degree": (
        "the degree equals minus twice the Weyl vector norm",
        _check_degree),
    "prop.hodge-grid": (
        "the bigraded cells have binomial dimensions and hold u_+",
        _check_hodge_grid),
    "thm.graded-differential": (
        "the differential decomposes into the four unit arrows",
        _check_graded_differential),
    "lem.torus-restriction": (
        "the canonical pair restricts to the torus pair",
        _check_torus_restriction),
    "cor.spectral-e2": (
        "the second page is the torus grid",
        _check_spectral_e2),
    "cor.total-cohomology": (
        "total cohomology is binomial and factors through the halves",
        _check_total_cohomology),
    "prop.picard": (
        "Picard dimensions match the torus rank",
        _check_picard),
}


def run_checks(ctx: CheckContext, names=None) -> list:
    if names is None:
        names = sorted(REGISTRY)
    else:
        unknown = [n for n in names if n not in REGISTRY]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
        names = sorted(set(names))
    results = []
    for name in names:
        anchor, fn = REGISTRY[name]
        start = time.perf_counter()
        try:
            witness = fn(ctx)
            status = "pass"
        except Skipped as exc:
            status, witness = "skipped", str(exc)
        except CheckFailure as exc:
            status, witness = "fail", str(exc)
        except Exception as exc:
            status, witness = "fail", f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(
            name, anchor, status, witness, time.perf_counter() - start))
    return results
