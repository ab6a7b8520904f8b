"""Brute-force ground truth: enumerated maps, their flags and colouring sums."""

from .classify import Flags, classify
from .maps import CombMap, Multigraph, enumerate_rooted_maps, map_count_formula
from .potts import PottsValue, potts_bruteforce, potts_polynomial
from .series import colouring_weight, oracle_dump, oracle_series

__all__ = [
    "CombMap", "Flags", "Multigraph", "PottsValue", "classify", "colouring_weight",
    "enumerate_rooted_maps", "map_count_formula", "oracle_dump", "oracle_series",
    "potts_bruteforce", "potts_polynomial",
]
