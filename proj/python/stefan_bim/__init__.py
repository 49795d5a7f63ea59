"""One-phase Stefan problem: front-fixing discretization with a relaxed boundary iteration."""

from ._core import (
    ConfigError,
    CurveError,
    Discretization,
    ExactSolution,
    ProblemSpec,
    SolveError,
    StefanError,
    apply_P,
    apply_R,
    builtin_example,
    discrepancy,
    error_Ekn,
    order_p,
    refine_boundary,
    refinement_study,
    residual_study,
    run_iteration,
    solve_fixed_boundary,
)

__all__ = [
    "ConfigError",
    "CurveError",
    "Discretization",
    "ExactSolution",
    "ProblemSpec",
    "SolveError",
    "StefanError",
    "apply_P",
    "apply_R",
    "builtin_example",
    "discrepancy",
    "error_Ekn",
    "order_p",
    "refine_boundary",
    "refinement_study",
    "residual_study",
    "run_iteration",
    "solve_fixed_boundary",
]
