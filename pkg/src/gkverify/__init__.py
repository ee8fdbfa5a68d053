"""Exact verification of Lie-algebraic generalized Kahler data on compact groups."""

__version__ = "0.1.0"

from .exactfield import (  # noqa: F401
    Matrix,
    Scalar,
    Subspace,
    format_scalar,
    is_eigenvector,
    kernel,
    parse_scalar,
    rref,
)
from .liealg import GroupSpec, build  # noqa: F401
from .lagrangian import (  # noqa: F401
    BDTriple,
    Double,
    GKPair,
    enumerate_bd,
    evens_lu,
    gk_pair,
    samelson,
    split_classify,
)
from .clifford import (  # noqa: F401
    CliffordElement,
    Form,
    Multivector,
    cl_mul,
    d_cl,
    dcl_cohomology,
    dequantize,
    quantize,
    spinor_action,
    star,
    star_inv,
    tau_prime,
    theta,
)
from .genkahler import (  # noqa: F401
    annihilator_of,
    build_pure_spinor,
    canonical_connection_eigenvalue,
    degree_canonical,
    graded_dcl,
    hodge_grid,
    torus_restriction_check,
    type_of,
    verify_dcl_spinor,
)
from .cohomology import (  # noqa: F401
    ce_cohomology,
    e1_page,
    e2_page,
    kunneth,
    picard_report,
    total_cohomology,
)
from .presets import build_group, preset_pair  # noqa: F401
from .checks import CheckContext, run_checks  # noqa: F401
