"""Minimum hybridization networks for three rooted binary trees."""

from ._hybnet import (
    RHO,
    HybnetError,
    aafs,
    canonical_newick,
    convert,
    displays,
    gen_random,
    hybridization_number,
    solve,
    verify,
)

__all__ = [
    "RHO",
    "HybnetError",
    "aafs",
    "canonical_newick",
    "convert",
    "displays",
    "gen_random",
    "hybridization_number",
    "solve",
    "verify",
]
