"""hypcert: exact-arithmetic construction and independent verification of
cut-hyperplane families with shrinking distance and a fixed trace-ring bound,
over Q (noncompact case) and Q(sqrt 5) (compact case).
"""

from .quadfield import (
    FieldDescriptor,
    IntegralityClass,
    QSQRT5,
    QuadElem,
    QuadFieldError,
    RATIONAL_FIELD,
    integer_sqrt_floor,
    parse_quad,
    quad,
    rational,
)
from .geometry import (
    Compactness,
    CompactnessResult,
    DistanceInterval,
    GeometryError,
    LorentzForm,
    NormalVector,
    PairClass,
    classify_compactness,
    classify_pair,
    cosh_sq_distance,
    distance_interval,
    interval_brackets,
)
from .tracering import (
    Factorization,
    FactorizationError,
    IdealKind,
    InvertedPrime,
    PrimeIdealFactor,
    TraceRingBound,
    factor_principal_ideal,
    factorize,
    is_T_smooth,
    is_prime,
    pigeonhole_groups,
    smooth_targets,
    subring_lattice,
    trace_ring_bound_quadratic,
    trace_ring_bound_rational,
)
from .noncompact import (
    ConstructionError,
    Decomposition,
    Eq1Report,
    build_w_noncompact,
    check_eq1,
    decompose,
    gen_noncompact_family,
    gen_noncompact_from_targets,
)
from .compact import (
    CompactStep,
    ConvergenceDiagnostics,
    RhoParameter,
    SearchBudgetExceeded,
    build_w_compact,
    check_eq1_compact,
    compute_step,
    convergence_diagnostics,
    gen_compact_family,
    three_squares_decompose,
    validate_rho,
)
from .certificates import (
    FamilyCertificate,
    MalformedCertificate,
    VerificationReport,
    certificates_from_json,
    certificates_to_json,
    render_report,
    verify,
    verify_obj,
)

__version__ = "0.1.0"
