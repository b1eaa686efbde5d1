"""Dynamic programs for parity-style graph queries, with brute-force oracles."""

from ._dyncomplab import (
    Error,
    Structure,
    SymState,
    ValidationError,
    catalog,
    covered_set,
    eval_query,
    fixture,
    fixture_names,
    fixture_script,
    fuzz,
    lower_bound_edges,
    materialize,
    run,
    run_engine,
    verify_lower_bound,
)

__all__ = [
    "Error",
    "Structure",
    "SymState",
    "ValidationError",
    "catalog",
    "covered_set",
    "eval_query",
    "fixture",
    "fixture_names",
    "fixture_script",
    "fuzz",
    "lower_bound_edges",
    "materialize",
    "run",
    "run_engine",
    "verify_lower_bound",
]
