"""Rate nodes of a weighted directed network as if they competed.

Each connected unordered pair becomes one match: the forward weight is one
side's score, the reverse weight (or 0) the other's.  Any rating method
then applies; with least-squares ratings the difference r_i - r_j
estimates the pairwise balance (exports minus imports, credit minus
debit).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable

from rank_forge import alt_ratings, massey
from rank_forge.competition import Match, MatchList

logger = logging.getLogger(__name__)

RATING_METHODS = ("massey", "keener", "odm", "elo")


@dataclass(frozen=True)
class WeightedDigraph:
    """Node registry plus directed positive-weight edges.

    Parallel edges are summed and self-loops dropped at ingestion;
    ``dropped_self_loops`` counts the drops for reporting.
    """

    nodes: tuple[str, ...]
    edges: dict[tuple[int, int], float]
    dropped_self_loops: int = 0

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("node registry contains duplicates")
        n = len(self.nodes)
        for (src, dst), weight in self.edges.items():
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"edge ({src}, {dst}) references unknown node index")
            if src == dst:
                raise ValueError("self-loops must be dropped at ingestion")
            if not math.isfinite(weight) or weight <= 0:
                raise ValueError(f"edge weight must be positive and finite, got {weight!r}")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, float]], nodes: Iterable[str] = ()) -> "WeightedDigraph":
        """Registry in first-appearance order; duplicates summed, loops dropped."""
        registry: list[str] = []
        seen: dict[str, int] = {}

        def intern(name: str) -> int:
            if name not in seen:
                seen[name] = len(registry)
                registry.append(name)
            return seen[name]

        for node in nodes:
            intern(node)
        merged: dict[tuple[int, int], float] = {}
        dropped = 0
        for src, dst, weight in edges:
            i, j = intern(src), intern(dst)
            if i == j:
                dropped += 1
                logger.warning("dropping self-loop on %r (weight %s)", src, weight)
                continue
            merged[(i, j)] = merged.get((i, j), 0.0) + float(weight)
        return cls(nodes=tuple(registry), edges=merged, dropped_self_loops=dropped)

    @property
    def n(self) -> int:
        return len(self.nodes)


def digraph_to_matches(graph: WeightedDigraph) -> MatchList:
    """One match per connected unordered pair, scored by the edge weights.

    Both directions present: (w_ij, w_ji).  One direction only: the silent
    side scores 0.  No edge either way: no match.  All matches share day 1.
    """
    matches = []
    pairs = sorted({(min(i, j), max(i, j)) for i, j in graph.edges})
    for i, j in pairs:
        forward = graph.edges.get((i, j), 0.0)
        backward = graph.edges.get((j, i), 0.0)
        matches.append(
            Match(
                team_a=graph.nodes[i],
                team_b=graph.nodes[j],
                score_a=forward,
                score_b=backward,
                day=1,
            )
        )
    return MatchList(teams=graph.nodes, matches=tuple(matches))


def rate_network(graph: WeightedDigraph, method: str, **options):
    """Transform to matches and dispatch to the chosen rating method.

    Returns a RatingReport for ``massey``; the other methods return their
    native shapes ((r, lambda), (o, d), or a ratings vector).  Options pass
    through: ``smoothing``/``tol``/``max_iter`` for keener and odm,
    ``params`` for elo.
    """
    if method not in RATING_METHODS:
        raise ValueError(f"unknown rating method {method!r}")
    matches = digraph_to_matches(graph)
    if method == "massey":
        return massey.build_report(massey.build_system(matches))
    if method in ("keener", "odm"):
        strengths = alt_ratings.strength_matrix(matches, options.get("smoothing", "laplace"))
        kwargs = {
            "tol": options.get("tol", alt_ratings.DEFAULT_TOL),
            "max_iter": options.get("max_iter", alt_ratings.DEFAULT_MAX_ITER),
        }
        if method == "keener":
            return alt_ratings.keener_rating(strengths, **kwargs)
        return alt_ratings.odm_rating(strengths, **kwargs)
    return alt_ratings.elo_run(matches, options.get("params", alt_ratings.EloParams()))
