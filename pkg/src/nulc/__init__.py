"""Node Unique Label Cover: exact FPT solver, brute-force oracle, generators and CLI."""
from .instance import (
    Instance,
    ParseError,
    Permutation,
    Solution,
    Verdict,
    force_deletions,
    parse_instance,
    parse_solution,
    perm_inverse,
    serialize_instance,
    serialize_solution,
    verify_solution,
)
from .oracle import brute_force
from .solver import SearchStats, solve

__all__ = [
    "Instance", "ParseError", "Permutation", "Solution", "Verdict", "force_deletions",
    "parse_instance", "parse_solution", "perm_inverse", "serialize_instance",
    "serialize_solution", "verify_solution", "brute_force", "SearchStats", "solve",
]
__version__ = "0.1.0"
