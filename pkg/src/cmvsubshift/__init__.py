"""CMV operators over two-letter subshifts: transfer matrices, trace maps,
Floquet spectra of periodic approximants, and Gordon phase sets."""

from .arcs import ArcSet
from .errors import (
    NumericAssertionError,
    RationalThetaError,
    ResourceCapError,
    ValidationError,
)
from .gordon import (
    GordonReport,
    bad_arcs,
    golden_limits,
    gordon_set,
    monte_carlo_measure,
    verify_membership,
)
from .quadratic import GOLDEN_MEAN, SQRT2_MINUS_1, Quadratic, parse_theta
from .spectrum import (
    FloquetOperator,
    PeriodicAlphas,
    build_floquet,
    discriminant,
    discriminant_grid,
    floquet_discriminant_residual,
    period_doubling_arcs,
    periodic_approximant,
    spectrum_arcs,
)
from .tracemap import (
    StabilityVerdict,
    TraceOrbit,
    classify_orbit,
    coupling_constant,
    trace_bound_check,
    trace_orbit,
)
from .transfer import (
    SolutionPair,
    TransferMatrix2,
    VerblunskyMap,
    gordon_inequality_check,
    gz_product,
    gz_step,
    propagate,
    szego_step,
    theta_matrix,
    transfer_product,
)
from .words import (
    FIBONACCI,
    PERIOD_DOUBLING,
    THUE_MORSE,
    ContinuedFraction,
    RotationCoding,
    SubstitutionRule,
    Window,
    Word,
    check_three_block,
    check_two_block,
    continued_fraction,
    even_q_indices,
    fixed_point_prefix,
    sturmian_coding,
    substitution_word,
)

__version__ = "0.1.0"

__all__ = [
    "ArcSet",
    "ContinuedFraction",
    "FIBONACCI",
    "FloquetOperator",
    "GOLDEN_MEAN",
    "GordonReport",
    "NumericAssertionError",
    "PERIOD_DOUBLING",
    "PeriodicAlphas",
    "Quadratic",
    "RationalThetaError",
    "ResourceCapError",
    "RotationCoding",
    "SQRT2_MINUS_1",
    "SolutionPair",
    "StabilityVerdict",
    "SubstitutionRule",
    "THUE_MORSE",
    "TraceOrbit",
    "TransferMatrix2",
    "ValidationError",
    "VerblunskyMap",
    "Window",
    "Word",
    "bad_arcs",
    "build_floquet",
    "check_three_block",
    "check_two_block",
    "classify_orbit",
    "continued_fraction",
    "coupling_constant",
    "discriminant",
    "discriminant_grid",
    "even_q_indices",
    "fixed_point_prefix",
    "floquet_discriminant_residual",
    "golden_limits",
    "gordon_inequality_check",
    "gordon_set",
    "gz_product",
    "gz_step",
    "monte_carlo_measure",
    "parse_theta",
    "period_doubling_arcs",
    "periodic_approximant",
    "propagate",
    "spectrum_arcs",
    "substitution_word",
    "sturmian_coding",
    "szego_step",
    "theta_matrix",
    "trace_bound_check",
    "trace_orbit",
    "transfer_product",
    "verify_membership",
]
