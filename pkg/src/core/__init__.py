"""Exact orbit-counting generating functions for small finite groups."""
from .errors import GroupEngineError
from .group_table import GroupTable, Subgroup, build_from_cayley, build_from_permutations, certify
from .pcp import PcPresentation, build_from_pcp
from .rational_gf import PartialFractions, Polynomial, RationalGF

__all__ = [
    "GroupEngineError",
    "GroupTable",
    "Subgroup",
    "build_from_cayley",
    "build_from_permutations",
    "certify",
    "PcPresentation",
    "build_from_pcp",
    "PartialFractions",
    "Polynomial",
    "RationalGF",
]
