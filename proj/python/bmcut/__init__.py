"""Bipartite multicut: exact solvers, LP/SDP relaxations and rounding."""

import json

from ._core import (
    InfeasibleInstance,
    Instance,
    InternalError,
    ParseError,
    SolverError,
    brute_force_cut,
    exact_cut,
    lp_value,
    minuncut_to_bmc,
    path_multicut,
    sdp_value,
    solve_json,
)


def solve(instance, method="exact", seed=1):
    """Run a solver and return its report as a dict."""
    return json.loads(solve_json(instance, method, seed))


__all__ = [
    "InfeasibleInstance",
    "Instance",
    "InternalError",
    "ParseError",
    "SolverError",
    "brute_force_cut",
    "exact_cut",
    "lp_value",
    "minuncut_to_bmc",
    "path_multicut",
    "sdp_value",
    "solve",
    "solve_json",
]
