"""Least-squares sport ratings with graph diagnostics and related methods.

The heavy numeric kernels are compiled (Cython) when available, with a
pure-Python fallback selected at import; see ``rank_forge.linalg``.
"""

from rank_forge import alt_ratings, cli, competition, errors, linalg, massey, netflow
from rank_forge.alt_ratings import EloParams, StrengthMatrix
from rank_forge.competition import Match, MatchGraph, MatchList, Schedule
from rank_forge.linalg import KERNEL_BACKEND
from rank_forge.massey import MasseySystem, RatingReport
from rank_forge.netflow import WeightedDigraph

__version__ = "0.1.0"

__all__ = [
    "EloParams",
    "KERNEL_BACKEND",
    "Match",
    "MatchGraph",
    "MatchList",
    "MasseySystem",
    "RatingReport",
    "Schedule",
    "StrengthMatrix",
    "WeightedDigraph",
    "__version__",
    "alt_ratings",
    "cli",
    "competition",
    "errors",
    "linalg",
    "massey",
    "netflow",
]
