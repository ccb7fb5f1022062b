"""Two-stage envelope dimension reduction with an auxiliary variable.

The heavy lifting lives in the compiled ``_core`` module; this package
re-exports its functions under one flat namespace.
"""

from ._core import (
    ToolkitError,
    bic_rank,
    direct_estimate,
    envelope_basis,
    generate,
    hybrid_kernel,
    kernels,
    qda_loo_accuracy,
    read_csv,
    select_dimensions,
    standardize,
    trace_correlation,
    truth_bases,
    tune_by_bootstrap,
    tune_by_loo,
    two_stage_estimate,
)

__all__ = [
    "ToolkitError",
    "bic_rank",
    "direct_estimate",
    "envelope_basis",
    "generate",
    "hybrid_kernel",
    "kernels",
    "qda_loo_accuracy",
    "read_csv",
    "select_dimensions",
    "standardize",
    "trace_correlation",
    "truth_bases",
    "tune_by_bootstrap",
    "tune_by_loo",
    "two_stage_estimate",
]
