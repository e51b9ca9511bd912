"""Random-feature collocation solver for PDE benchmarks."""

from elmpde._core import (
    Domain,
    GaussNewtonOptions,
    Method,
    PointAllocation,
    PointRule,
    PointSet,
    RandomFeatureLayer,
    Ratio,
    RunConfig,
    RunResult,
    SpectrumEntry,
    allocate_counts,
    catalog_ids,
    exact_value,
    lse_solve,
    numerical_rank,
    penalty_solve,
    pinv_solve,
    problem_info,
    rmse,
    run_convergence,
    run_single,
    sample_point_set,
    singular_values,
    spectrum_report,
)

__all__ = [
    "Domain",
    "GaussNewtonOptions",
    "Method",
    "PointAllocation",
    "PointRule",
    "PointSet",
    "RandomFeatureLayer",
    "Ratio",
    "RunConfig",
    "RunResult",
    "SpectrumEntry",
    "allocate_counts",
    "catalog_ids",
    "exact_value",
    "lse_solve",
    "numerical_rank",
    "penalty_solve",
    "pinv_solve",
    "problem_info",
    "rmse",
    "run_convergence",
    "run_single",
    "sample_point_set",
    "singular_values",
    "spectrum_report",
]
