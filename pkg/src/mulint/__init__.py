"""mulint: complex multiplicative calculus along parametric curves.

Computes multiplicative derivatives exp(f'/f), multiplicative line
integrals, and the multi-valued multiplicative contour integral of a
nowhere-vanishing function along a piecewise-smooth curve, using a
branch-tracked continuous logarithm.  Complex scalars are plain Python
``complex`` values; all public operations keep them finite.
"""

from .branch import (
    BranchPolicy,
    HalfPlanePartition,
    LogTrack,
    build_log_track,
    half_plane_partition,
    unwrap_phase,
)
from .curves import (
    CurveSegment,
    ParametricCurve,
    arc,
    circle,
    curve_point,
    line_segment,
    parametric,
    parse_curve_spec,
    polyline,
)
from .errors import (
    BranchJumpError,
    DomainError,
    EvaluationError,
    IntegralOverflowError,
    MulintError,
    NonDifferentiableError,
    NonPositiveValueError,
    ParameterOutOfRangeError,
    ParseError,
    RefinementExhaustedError,
    ToleranceNotMetError,
    UnknownIdentifierError,
    ZeroOnCurveError,
    ZeroValueError,
)
from .expr import (
    Expr,
    bind_constants,
    differentiate,
    evaluate,
    evaluate_array,
    parse_complex_literal,
    parse_expression,
    to_source,
)
from .integrate import (
    QuadratureSettings,
    contour_integral,
    line_star_integral,
    riemann_star_product,
    star_integral,
    star_integral_from_track,
    star_integral_via_cartesian,
)
from .multivalued import (
    Cardinality,
    MultiValuedIntegral,
    classify_cardinality,
    distinct_values,
    multivalue_at,
)
from .starcalc import (
    PolarDecomposition,
    StarCRReport,
    check_star_cr_relations,
    polar_decompose,
    real_star_partial,
    star_derivative,
    star_derivative_expr,
)
from .verify import (
    PropertyReport,
    check_closed_curve_unity,
    check_concatenation,
    check_fundamental_theorem,
    check_line_fundamental,
    check_natural_power,
    check_product_division,
    check_reversal,
    run_suite,
    run_suites,
    standard_fixtures,
)

__version__ = "0.1.0"

__all__ = [
    "BranchJumpError",
    "BranchPolicy",
    "Cardinality",
    "CurveSegment",
    "DomainError",
    "EvaluationError",
    "Expr",
    "HalfPlanePartition",
    "IntegralOverflowError",
    "LogTrack",
    "MultiValuedIntegral",
    "MulintError",
    "NonDifferentiableError",
    "NonPositiveValueError",
    "ParameterOutOfRangeError",
    "ParametricCurve",
    "ParseError",
    "PolarDecomposition",
    "PropertyReport",
    "QuadratureSettings",
    "RefinementExhaustedError",
    "StarCRReport",
    "ToleranceNotMetError",
    "UnknownIdentifierError",
    "ZeroOnCurveError",
    "ZeroValueError",
    "arc",
    "bind_constants",
    "build_log_track",
    "check_closed_curve_unity",
    "check_concatenation",
    "check_fundamental_theorem",
    "check_line_fundamental",
    "check_natural_power",
    "check_product_division",
    "check_reversal",
    "check_star_cr_relations",
    "circle",
    "classify_cardinality",
    "contour_integral",
    "curve_point",
    "differentiate",
    "distinct_values",
    "evaluate",
    "evaluate_array",
    "half_plane_partition",
    "line_segment",
    "line_star_integral",
    "multivalue_at",
    "parametric",
    "parse_complex_literal",
    "parse_curve_spec",
    "parse_expression",
    "polar_decompose",
    "polyline",
    "real_star_partial",
    "riemann_star_product",
    "run_suite",
    "run_suites",
    "standard_fixtures",
    "star_derivative",
    "star_derivative_expr",
    "star_integral",
    "star_integral_from_track",
    "star_integral_via_cartesian",
    "to_source",
    "unwrap_phase",
]
