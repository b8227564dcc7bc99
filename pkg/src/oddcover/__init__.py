"""Odd covers of graphs: bounds, constructions, verification and exact search."""

from .cover import Biclique, CoverCode, OddCover, Triclique, decode, encode, incidence_matrix, verify
from .gf2 import Gf2Matrix, Gf2Vector, rank, solve_subset, symplectic_decompose
from .graph import Graph

__version__ = "0.1.0"

__all__ = [
    "Biclique",
    "CoverCode",
    "Gf2Matrix",
    "Gf2Vector",
    "Graph",
    "OddCover",
    "Triclique",
    "decode",
    "encode",
    "incidence_matrix",
    "rank",
    "solve_subset",
    "symplectic_decompose",
    "verify",
]
