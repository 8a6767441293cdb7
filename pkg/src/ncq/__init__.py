"""Differential calculus over finite-dimensional associative division algebras."""

from .algebra import (
    COMPLEX,
    QUATERNION,
    AlgebraSpec,
    Element,
    abs_sq,
    change_basis,
    conj,
    efab,
    format_element,
    from_name,
    inverse,
    mul,
)
from .errors import (
    DimensionError,
    DivisionByZero,
    EvaluationError,
    NcqError,
    NotMultilinear,
    NotRealizable,
    OrderTooHigh,
    ParseError,
    SemanticError,
    SingularTransform,
    Truncated,
    UnboundVariable,
    UnsupportedOperation,
)
from .gateaux import (
    ClosedFormEntry,
    DerivativeResult,
    closed_form_table,
    d_star,
    derivative,
    derive,
    derive_all_equal,
    derive_by_injections,
    differential_std_components,
    jacobian,
    numeric_gateaux,
    star_d,
)
from .linear_maps import (
    CoordMatrix,
    GeneratedMap,
    PairRep,
    StdComponents,
    apply,
    cauchy_riemann_check,
    compose,
    compose_std,
    coord_to_std,
    generated_coords,
    map_norm,
    std_to_coord,
    transform_coords,
)
from .nc_poly import (
    CoordinateForm,
    NcPoly,
    NcWord,
    eval_poly,
    expand,
    format_poly,
    is_symmetric,
    polylinear_coords,
    semantic_eq,
)
from .parser import parse, parse_element, parse_poly
from .taylor_ode import (
    ConvergenceProbe,
    OdeOutcome,
    OdeProblem,
    TaylorPoly,
    exp_additivity_defect,
    exp_series,
    exponent_derivative,
    remainder_probe,
    solve_ode,
    taylor_expand,
)

__version__ = "0.1.0"
