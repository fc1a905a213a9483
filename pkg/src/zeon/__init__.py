"""Sparse complex zeon algebra: arithmetic, polynomials, zero finding.

The algebra on ``n`` commuting null-square generators is represented
sparsely by bitmask-indexed blades.  On top of the core arithmetic sit
polynomials with zeon coefficients, spectral zero finding, quadratic
and nilpotent-discriminant analysis, and extensions of analytic
functions with preimage computation.
"""

from ._backend import backend_name
from .algebra import (
    MAX_GENERATORS,
    Tolerance,
    Zeon,
    default_tolerance,
    generators,
    indices_to_mask,
    kth_roots,
    mask_to_indices,
    principal_kth_root,
    set_default_tolerance,
)
from .analytic import (
    COS,
    EXP,
    LOG,
    SIN,
    SQRT,
    AnalyticFunction,
    ZeonExtension,
    by_name,
    extend_eval,
    polynomial_form,
    power_function,
    preimage,
)
from .errors import (
    DimensionMismatch,
    DivisorNotMonicizable,
    FamilyPreconditionError,
    LeadingCoefficientNotInvertible,
    NotInvertible,
    NotSpectrallySimple,
    OutsideDomain,
    RootFindingFailed,
    SeedMismatch,
    SqrtNotFound,
    ZeonError,
)
from .poly import (
    DivisionResult,
    QuadraticKind,
    QuadraticOutcome,
    ZeonPoly,
    discriminant,
    divide,
    nilpotent_sqrt,
    quadratic_solve,
    remainder_at,
)
from .solve import (
    FamilySpec,
    ScalarRoot,
    SolveReport,
    SpectralZero,
    ZeroSetDescription,
    ZeroSetKind,
    classify_nilpotent_zeros,
    is_extension_zero,
    multiple_zero_family,
    scalar_roots,
    spectrally_simple_zero,
    split,
)
from .textio import (
    format_complex,
    format_poly,
    format_zeon,
    parse_complex,
    parse_poly,
    parse_zeon,
    poly_from_dict,
    poly_from_json,
    poly_to_dict,
    poly_to_json,
    zeon_from_dict,
    zeon_from_json,
    zeon_to_dict,
    zeon_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "MAX_GENERATORS",
    "Tolerance",
    "Zeon",
    "default_tolerance",
    "set_default_tolerance",
    "generators",
    "indices_to_mask",
    "mask_to_indices",
    "kth_roots",
    "principal_kth_root",
    "ZeonError",
    "DimensionMismatch",
    "NotInvertible",
    "DivisorNotMonicizable",
    "LeadingCoefficientNotInvertible",
    "NotSpectrallySimple",
    "SeedMismatch",
    "OutsideDomain",
    "RootFindingFailed",
    "SqrtNotFound",
    "FamilyPreconditionError",
    "ZeonPoly",
    "DivisionResult",
    "divide",
    "remainder_at",
    "discriminant",
    "nilpotent_sqrt",
    "QuadraticKind",
    "QuadraticOutcome",
    "quadratic_solve",
    "ScalarRoot",
    "scalar_roots",
    "SpectralZero",
    "spectrally_simple_zero",
    "ZeroSetKind",
    "ZeroSetDescription",
    "FamilySpec",
    "SolveReport",
    "split",
    "classify_nilpotent_zeros",
    "is_extension_zero",
    "multiple_zero_family",
    "AnalyticFunction",
    "EXP",
    "LOG",
    "SIN",
    "COS",
    "SQRT",
    "power_function",
    "by_name",
    "ZeonExtension",
    "extend_eval",
    "polynomial_form",
    "preimage",
    "format_complex",
    "parse_complex",
    "format_zeon",
    "parse_zeon",
    "format_poly",
    "parse_poly",
    "zeon_to_dict",
    "zeon_from_dict",
    "zeon_to_json",
    "zeon_from_json",
    "poly_to_dict",
    "poly_from_dict",
    "poly_to_json",
    "poly_from_json",
]
