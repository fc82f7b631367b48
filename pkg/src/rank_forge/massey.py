"""Least-squares team ratings from point spreads.

The rating vector r solves the normal equations of the match system
``X r = y`` (one row per match, +1 winner / -1 loser, y the absolute
margin).  The normal matrix is the Laplacian of the match graph, so it is
singular; a unique sum-to-zero solution is picked by replacing the last row
with all-ones.  The same row-replacement trick, with the +/-1 partition
vector, solves the offense/defense system when the match graph is
bipartite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rank_forge import linalg
from rank_forge.competition import MatchGraph, MatchList, bipartition, build_match_graph, is_connected
from rank_forge.errors import DisconnectedGraphError, InternalMismatchError, ZeroGamesError


@dataclass(frozen=True)
class MasseySystem:
    """All matrices derived from a match list.

    ``normal_matrix`` equals degrees-minus-adjacency of the match graph;
    ``team_spread`` is points_for - points_against and sums to zero.
    """

    incidence: np.ndarray  # m x n, one +1 and one -1 per row
    match_margins: np.ndarray  # length m, nonnegative
    normal_matrix: np.ndarray  # n x n
    team_spread: np.ndarray  # length n
    points_for: np.ndarray
    points_against: np.ndarray
    graph: MatchGraph

    def __post_init__(self):
        for array in (
            self.incidence,
            self.match_margins,
            self.normal_matrix,
            self.team_spread,
            self.points_for,
            self.points_against,
        ):
            array.setflags(write=False)

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class Diagnostics:
    connected: bool
    bipartite: bool
    lambda2: float
    bound_lhs: float
    bound_rhs: float


@dataclass(frozen=True)
class RatingReport:
    """Per-team ratings plus the graph diagnostics of the run."""

    rating: np.ndarray  # r, sums to zero
    opponent_component: np.ndarray  # mean rating of opponents faced
    spread_component: np.ndarray  # mean point spread per game
    offense: np.ndarray
    defense: np.ndarray
    diagnostics: Diagnostics


def build_incidence(matches: MatchList) -> tuple[np.ndarray, np.ndarray]:
    """Match-team matrix and absolute margins.

    Row k carries +1 for the winner and -1 for the loser of match k.  Draws
    put the +1 on the lower registry index (the margin is zero, so the
    orientation cannot affect any derived quantity).
    """
    if matches.n < 2:
        raise ValueError("need at least 2 teams")
    if matches.m < 1:
        raise ValueError("need at least 1 match")
    index = matches.index
    incidence = np.zeros((matches.m, matches.n), dtype=np.float64)
    margins = np.zeros(matches.m, dtype=np.float64)
    for k, match in enumerate(matches.matches):
        i, j = index[match.team_a], index[match.team_b]
        if match.score_a > match.score_b:
            winner, loser = i, j
        elif match.score_b > match.score_a:
            winner, loser = j, i
        else:
            winner, loser = min(i, j), max(i, j)
        incidence[k, winner] = 1.0
        incidence[k, loser] = -1.0
        margins[k] = abs(match.score_a - match.score_b)
    return incidence, margins


def build_system(matches: MatchList) -> MasseySystem:
    """Assemble the normal equations by direct match accumulation.

    The accumulated matrices are cross-checked against the incidence
    products; disagreement raises InternalMismatchError (bug guard).
    """
    graph = build_match_graph(matches)
    incidence, margins = build_incidence(matches)
    n = matches.n
    index = matches.index

    spread = np.zeros(n, dtype=np.float64)
    points_for = np.zeros(n, dtype=np.float64)
    points_against = np.zeros(n, dtype=np.float64)
    for match in matches.matches:
        i, j = index[match.team_a], index[match.team_b]
        points_for[i] += match.score_a
        points_for[j] += match.score_b
        points_against[i] += match.score_b
        points_against[j] += match.score_a
        spread[i] += match.score_a - match.score_b
        spread[j] += match.score_b - match.score_a

    normal = (np.diag(graph.degrees) - graph.adjacency).astype(np.float64)

    if np.abs(normal - incidence.T @ incidence).max() > linalg.TOL_RESIDUAL:
        raise InternalMismatchError("normal matrix disagrees with incidence product")
    if np.abs(spread - incidence.T @ margins).max() > linalg.TOL_RESIDUAL:
        raise InternalMismatchError("team spread disagrees with incidence product")

    return MasseySystem(
        incidence=incidence,
        match_margins=margins,
        normal_matrix=normal,
        team_spread=spread,
        points_for=points_for,
        points_against=points_against,
        graph=graph,
    )


def solve_ratings(system: MasseySystem) -> np.ndarray:
    """Sum-to-zero rating vector for a connected match graph.

    Replaces the last row of the normal matrix with all-ones (and the last
    spread entry with 0), which forces the solution of the original system
    that sums to zero.
    """
    if not is_connected(system.graph):
        raise DisconnectedGraphError(zero_game_teams=system.graph.zero_game_teams())
    replaced = system.normal_matrix.copy()
    replaced[-1, :] = 1.0
    rhs = system.team_spread.copy()
    rhs[-1] = 0.0
    return linalg.solve_dense(replaced, rhs)


def decompose_rating(system: MasseySystem, rating: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split r into mean-opponent-rating and mean-spread components."""
    degrees = system.graph.degrees
    zero = np.nonzero(degrees == 0)[0]
    if zero.size:
        raise ZeroGamesError(int(zero[0]))
    games = degrees.astype(np.float64)
    opponent = (system.graph.adjacency @ rating) / games
    spread = system.team_spread / games
    return opponent, spread


def offense_defense(system: MasseySystem, rating: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Offensive/defensive split with r = o + d.

    Solves ``(degrees + adjacency) d = degrees*r - points_for``.  That
    signless-Laplacian system is singular exactly when the connected match
    graph is bipartite; in that case the last row is replaced by the +/-1
    partition vector (and the rhs entry by 0), mirroring the rating solve.
    """
    graph = system.graph
    parts = bipartition(graph)  # raises DisconnectedGraphError when disconnected
    signless = (np.diag(graph.degrees) + graph.adjacency).astype(np.float64)
    rhs = graph.degrees * rating - system.points_for
    if parts is not None:
        part_u, part_v = parts
        sign = np.zeros(system.n, dtype=np.float64)
        sign[list(part_u)] = 1.0
        sign[list(part_v)] = -1.0
        signless[-1, :] = sign
        rhs = rhs.copy()
        rhs[-1] = 0.0
    defense = linalg.solve_dense(signless, rhs)
    return rating - defense, defense


def edge_flows(system: MasseySystem, rating: np.ndarray) -> list[tuple[int, int, float]]:
    """Rating differences scaled by match counts, one entry per played pair.

    Interpreting ratings as node potentials, flow(i, j) is the current on
    the edge; the signed flows out of a node sum to its point spread.
    """
    adjacency = system.graph.adjacency
    flows = []
    for i in range(system.n):
        for j in range(i + 1, system.n):
            if adjacency[i, j] > 0:
                flows.append((i, j, float(adjacency[i, j] * (rating[i] - rating[j]))))
    return flows


def katz_rating(adjacency, alpha: float, beta) -> np.ndarray:
    """Solve ``(I - alpha*A) r = beta``.

    Singular whenever 1/alpha is an eigenvalue of A; in particular, when
    every team has played exactly k games, alpha = 1/k fails.
    """
    a = linalg.as_dense_matrix(adjacency, square=True)
    b = linalg.as_dense_vector(beta)
    return linalg.solve_dense(np.eye(a.shape[0]) - alpha * a, b)


def algebraic_connectivity(system: MasseySystem) -> float:
    """Second-smallest eigenvalue of the normal matrix (graph Laplacian)."""
    return float(linalg.symmetric_eigenvalues(system.normal_matrix)[1])


def _bound_pair(system: MasseySystem, rating: np.ndarray, lambda2: float) -> tuple[float, float]:
    n = system.n
    spread = system.team_spread
    lhs = float(np.linalg.norm(rating - spread / n))
    rhs = float(np.linalg.norm(spread) * (n - lambda2) / (n * lambda2))
    return lhs, rhs


def spectral_gap_bound(system: MasseySystem, rating: np.ndarray) -> tuple[float, float]:
    """How far the rating can sit from mean-spread-per-team.

    Returns (lhs, rhs) with lhs = ||r - p/n|| and
    rhs = ||p|| (n - lambda2) / (n*lambda2), lambda2 the algebraic
    connectivity of the match graph.  lhs <= rhs whenever no fixture
    repeats (the derivation needs every Laplacian eigenvalue <= n, which
    repeated pairs can break); equality of r and p/n is reached on a
    complete match graph.
    """
    if not is_connected(system.graph):
        raise DisconnectedGraphError(zero_game_teams=system.graph.zero_game_teams())
    return _bound_pair(system, rating, algebraic_connectivity(system))


def build_report(system: MasseySystem) -> RatingReport:
    """Full rating pipeline for a connected match graph."""
    rating = solve_ratings(system)
    opponent, spread = decompose_rating(system, rating)
    offense, defense = offense_defense(system, rating)
    lambda2 = algebraic_connectivity(system)
    lhs, rhs = _bound_pair(system, rating, lambda2)
    return RatingReport(
        rating=rating,
        opponent_component=opponent,
        spread_component=spread,
        offense=offense,
        defense=defense,
        diagnostics=Diagnostics(
            connected=True,
            bipartite=bipartition(system.graph) is not None,
            lambda2=lambda2,
            bound_lhs=lhs,
            bound_rhs=rhs,
        ),
    )
