"""Explicit solution operators for half-plane boundary value problems with
the non-symmetric jump-coefficient family A(x) = [[1, k sgn x], [-k sgn x, 1]].

The package computes the Dirichlet, regularity, and Neumann solutions by
closed-form kernels and boundary-equation inversion, exposes both solution
branches (energy and boundary-equation), and ships a verification suite
that checks every identity numerically against independent routes.
"""

from .config import (
    ACCRETIVITY_CONSTANT,
    Branch,
    Problem,
    ProblemConfig,
    Sense,
    Wellposedness,
    WellposednessReport,
    classify,
    conjugate_exponent,
    derive_config,
    dirichlet_threshold,
    neumann_threshold,
    regularity_threshold,
    threshold_for,
)
from .errors import (
    BoundednessRangeViolation,
    BranchDegenerate,
    DomainError,
    EvaluationOnInterface,
    GridTooCoarse,
    HalfplaneBVPError,
    InvalidExponent,
    NonConvergent,
    NonIntegrable,
    NotInvertible,
    NotWellPosed,
    OscillatoryNonConvergence,
    OutOfBoundednessRange,
    QuadratureFailure,
    SingularityOnBoundary,
    TailTooSlow,
    WindowLeak,
)
from .operators import (
    BoundaryVectorField,
    MultiplierSymbol,
    apply_halfline_op,
    band_op,
    cauchy_extension,
    cauchy_singular,
    double_layer,
    halfline_double_layer,
    halfline_double_layer_log_grid,
    halfline_inverse_index,
    hardy_projection,
    invert_half_line,
    log_line_symbol,
    lp_boundedness_interval,
    resolvent,
    smoothing_op,
)
from .quadrature import (
    AlgebraicDecay,
    BoundarySample,
    CompactSupport,
    ExponentialDecay,
    LogLineGrid,
    PanelRule,
    PiecewiseSmooth,
    PVQuadratureScheme,
    QuadratureResult,
    Smooth,
    graded_integral,
    halfline_tail_integral,
    line_integral,
    log_line_multiplier_apply,
    preset_sample,
    pv_integral,
)
from .solver import (
    FieldGrid,
    GridKind,
    GridSpec,
    PoissonKernelParams,
    axis_kernel,
    dirichlet_density,
    dirichlet_value,
    gradient_evaluator,
    harmonic_measure_table,
    neumann_density,
    poisson_kernel,
    pv_poisson_power_integral,
    quadrant_integral_identity,
    quadrant_poisson,
    regularity_density,
    solve_dirichlet,
    solve_neumann,
    solve_regularity,
)
from .verify import (
    NTMaxProfile,
    NTVariant,
    VerificationReport,
    curl_residual,
    dunford_reconstruction,
    dunford_scalar_identity,
    energy_scaling,
    nontangential_max,
    pde_residual,
    profile_lp_norm,
    run_suite,
    summary_table,
    trace_norm_sequence,
    transmission_check,
)

__version__ = "0.1.0"
