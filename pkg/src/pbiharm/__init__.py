"""Extremal constants of the one-dimensional fourth-order variational
problem and two-sided bound certificates for s-numbers of the associated
Sobolev embeddings and the order-2 Volterra integral operator."""

__version__ = "0.1.0"

from .numgrid import (
    Grid,
    GridFunction,
    Interval,
    default_grid,
    endpoint_chord,
    lp_norm,
    antiderivative,
    second_antiderivative,
    second_derivative,
    rescale,
)
from .extremal import (
    ConvergenceError,
    ExtremalKind,
    ExtremalSolution,
    b_constant,
    best_constant_shift,
    odd_extension,
    solve_aminus,
    solve_aplus,
    solve_extremal,
    solve_j0,
    solve_ja,
    solve_jb,
)
from .bounds import (
    BoundCertificate,
    BoundSide,
    PartitionKind,
    PartitionScheme,
    SNumberTable,
    TableRow,
    TargetOperator,
    bernstein_ratio,
    bernstein_subspace,
    certify_lower,
    certify_upper,
    interpolation_K,
    lower_bound_value,
    partition_lower,
    partition_upper,
    reference_constant,
    snumber_table,
    upper_bound_value,
    upper_tightness_ratio,
)
from .operators import (
    DiscretizedOperator,
    FactorizationReport,
    OperatorKind,
    SingularSpectrum,
    check_factorization,
    gamma_p,
    svd_snumbers,
    t1_reference,
    volterra_matrix,
)

__all__ = [
    "__version__",
    "Interval", "Grid", "GridFunction",
    "default_grid", "lp_norm", "antiderivative", "second_antiderivative",
    "second_derivative", "rescale", "endpoint_chord",
    "ExtremalKind", "ExtremalSolution", "ConvergenceError",
    "solve_extremal", "solve_j0", "solve_ja", "solve_jb",
    "solve_aplus", "solve_aminus", "b_constant",
    "best_constant_shift", "odd_extension",
    "TargetOperator", "PartitionKind", "PartitionScheme",
    "BoundSide", "BoundCertificate", "TableRow", "SNumberTable",
    "partition_upper", "partition_lower", "interpolation_K",
    "upper_bound_value", "lower_bound_value",
    "certify_upper", "certify_lower", "upper_tightness_ratio",
    "bernstein_subspace", "bernstein_ratio", "snumber_table",
    "reference_constant",
    "OperatorKind", "DiscretizedOperator", "SingularSpectrum",
    "FactorizationReport", "volterra_matrix", "svd_snumbers",
    "gamma_p", "t1_reference", "check_factorization",
]
