"""Discrete orthonormal polynomial solvers for linear ODEs and eigenproblems."""

from ._core import (
    DopsolveError,
    EvalError,
    ParseError,
    PlacementError,
    SchemaError,
    builtin_problems,
    constrained_basis,
    eig,
    evaluate,
    global_diffmat,
    gram_quality,
    local_diffmat,
    lse_solve,
    make_grid,
    solve,
    synth_dop,
    weighted_basis,
)

__all__ = [
    "DopsolveError",
    "EvalError",
    "ParseError",
    "PlacementError",
    "SchemaError",
    "builtin_problems",
    "constrained_basis",
    "eig",
    "evaluate",
    "global_diffmat",
    "gram_quality",
    "local_diffmat",
    "lse_solve",
    "make_grid",
    "solve",
    "synth_dop",
    "weighted_basis",
]
