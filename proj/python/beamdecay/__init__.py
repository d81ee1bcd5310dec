"""Damped hinged beam simulator with explicit exponential-decay certificates."""

from ._core import (
    Error,
    ParseError,
    Problem,
    ProvenanceError,
    SolverError,
    ValidationError,
    audit,
    certificate_constants,
    certify,
    discrete_constants,
    fit_decay_rate,
    load_problem,
    parse_problem,
    run_cli,
    simulate,
    solve_stationary,
)

__all__ = [
    "Error",
    "ParseError",
    "Problem",
    "ProvenanceError",
    "SolverError",
    "ValidationError",
    "audit",
    "certificate_constants",
    "certify",
    "discrete_constants",
    "fit_decay_rate",
    "load_problem",
    "parse_problem",
    "run_cli",
    "simulate",
    "solve_stationary",
]
