"""Exact/float simplex and the protection LP built on it."""

from .protection import (
    DEFAULT_EPSILON,
    alpha_name,
    beta_name,
    build_protection_lp,
    build_restricted_lp,
    delta_of,
    plan_from_assignment,
    protection_variables,
    sigma_of,
    solve_epsilon,
    solve_lexicographic,
)
from .simplex import (
    LinearConstraint,
    LinearProgram,
    LpSolution,
    Relation,
    SolverError,
    Status,
    solve,
)

__all__ = [
    "DEFAULT_EPSILON", "alpha_name", "beta_name", "build_protection_lp", "build_restricted_lp",
    "delta_of", "plan_from_assignment", "protection_variables", "sigma_of", "solve_epsilon",
    "solve_lexicographic", "LinearConstraint", "LinearProgram", "LpSolution", "Relation",
    "SolverError", "Status", "solve",
]
