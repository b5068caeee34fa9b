"""High-order filtered upwind sweeping for nondominated sorting."""

from ._core import (
    ClosedFormMismatch,
    InputError,
    InvariantFailure,
    arithmetic_weights,
    backward_weights,
    centered_weights,
    compare_rankings,
    forward_weights,
    observed_order,
    offset_weights,
    oracle_weights,
    pareto_peel,
    rank,
    run_study,
    sample_problem,
    sweep_solve,
    verify_residual,
)

__all__ = [
    "ClosedFormMismatch",
    "InputError",
    "InvariantFailure",
    "arithmetic_weights",
    "backward_weights",
    "centered_weights",
    "compare_rankings",
    "forward_weights",
    "observed_order",
    "offset_weights",
    "oracle_weights",
    "pareto_peel",
    "rank",
    "run_study",
    "sample_problem",
    "sweep_solve",
    "verify_residual",
]
