"""Exact torsion computations for y^2 = x^3 + bx + a over quadratic fields."""
from .arith import QuadElem, QuadField, is_rational_square, quad_arith, quad_sqrt, squarefree_kernel
from .curve import (
    INFINITY,
    Curve,
    Point,
    WIso,
    add_points,
    apply_iso,
    point_order,
    scalar_mul,
    tate_normal_form,
    validate,
)
from .errors import InputError, InternalInconsistency, QuadtorsError
from .paramcheck import ParamSystem, RatFunc, clear_denominators, consistency, load_fixture
from .poly import QPoly, poly_gcd, rational_roots, roots_in_quadratic_field
from .scan import ScanConfig, ScanRecord, report, scan
from .torsion import (
    KKM_GROUPS,
    TorsionGroup,
    classify_family,
    count_points_ff,
    division_polynomial,
    kkm_member,
    three_torsion,
    torsion_order_bound,
    torsion_subgroup,
    two_torsion,
)

__version__ = "0.1.0"
