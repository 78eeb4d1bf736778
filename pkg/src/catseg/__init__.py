"""Change-point detection for categorical sequences.

Penalized least-squares selection over dyadic partitions, a two-stage
hybrid estimator, dimension-jump calibration of the penalty constants,
greedy dyadic approximation and a Monte Carlo harness.
"""

from .approx import ApproxRun, BesovReport, adaptive_partition, besov_bound_check, e2_error, e_d
from .calibrate import (
    calibrate_c0,
    calibrate_stage2,
    default_dmax,
    dimension_jump,
    dimension_path,
)
from .core import (
    CalibrationError,
    CategorySequence,
    DegenerateInputError,
    DyadicInterval,
    FitResult,
    HaarCoefficients,
    InvalidArgumentError,
    Partition,
    PrefixCounts,
    ResourceLimitError,
    besov_seminorm,
    enumerate_dyadic_partitions,
    haar_transform,
    inverse_haar,
    prefix_counts,
    project_to_simplex,
    segment_cost,
    segment_mean,
)
from .dyadic_select import (
    DyadicGraph,
    build_graph,
    exact_model_risk,
    fit_preliminary,
    oracle_partition,
    shortest_path_select,
)
from .hybrid import (
    HybridConfig,
    HybridResult,
    LinearPenalty,
    LogPenalty,
    LogPracticalPenalty,
    fit_hybrid,
    map_to_full_indices,
    split_even_odd,
)
from .interval_dp import best_per_dimension, linear_penalty_path, select_with_penalty
from .sim import (
    PiecewiseSpec,
    RiskReport,
    analogue_specs,
    build_distribution,
    comparison_table,
    load_spec,
    monte_carlo_risk,
    preliminary_study,
    sample_sequence,
)

__all__ = [
    "adaptive_partition",
    "analogue_specs",
    "ApproxRun",
    "besov_bound_check",
    "besov_seminorm",
    "BesovReport",
    "best_per_dimension",
    "build_distribution",
    "build_graph",
    "calibrate_c0",
    "calibrate_stage2",
    "CalibrationError",
    "CategorySequence",
    "comparison_table",
    "default_dmax",
    "DegenerateInputError",
    "dimension_jump",
    "dimension_path",
    "DyadicGraph",
    "DyadicInterval",
    "e2_error",
    "e_d",
    "enumerate_dyadic_partitions",
    "exact_model_risk",
    "fit_hybrid",
    "fit_preliminary",
    "FitResult",
    "haar_transform",
    "HaarCoefficients",
    "HybridConfig",
    "HybridResult",
    "InvalidArgumentError",
    "inverse_haar",
    "linear_penalty_path",
    "LinearPenalty",
    "load_spec",
    "LogPenalty",
    "LogPracticalPenalty",
    "map_to_full_indices",
    "monte_carlo_risk",
    "oracle_partition",
    "Partition",
    "PiecewiseSpec",
    "prefix_counts",
    "PrefixCounts",
    "preliminary_study",
    "project_to_simplex",
    "ResourceLimitError",
    "RiskReport",
    "sample_sequence",
    "segment_cost",
    "segment_mean",
    "select_with_penalty",
    "shortest_path_select",
    "split_even_odd",
]

__version__ = "0.1.0"
