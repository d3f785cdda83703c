"""Python bindings for the plapkit solvers, audits and run artifacts."""

from ._core import (
    ConfigError,
    Grid,
    SolverAbort,
    audit,
    compare,
    evaluate,
    gradient_lp_pow,
    integrate,
    lp_norm,
    ngs_theta,
    parse_config,
    plap_apply,
    plap_jacobian_vec,
    pnorm_S1,
    run,
    solve,
    young_conjugate,
)

__all__ = [
    "ConfigError",
    "Grid",
    "SolverAbort",
    "audit",
    "compare",
    "evaluate",
    "gradient_lp_pow",
    "integrate",
    "lp_norm",
    "ngs_theta",
    "parse_config",
    "plap_apply",
    "plap_jacobian_vec",
    "pnorm_S1",
    "run",
    "solve",
    "young_conjugate",
]
