"""Core rating pipeline: system assembly, solves, decompositions, diagnostics."""

from __future__ import annotations

import numpy as np
import pytest

from rank_forge import linalg, massey
from rank_forge.competition import Match, MatchList
from rank_forge.errors import (
    DisconnectedGraphError,
    InternalMismatchError,
    SingularMatrixError,
    ZeroGamesError,
)

from gen import full_round_robin_matches, random_connected_matches

ATOL = 1e-9


def minimum_norm_ratings(incidence: np.ndarray, margins: np.ndarray) -> np.ndarray:
    """Oracle: min-norm least squares via pseudoinverse of the normal matrix,
    then projection of the all-ones nullspace direction."""
    normal = incidence.T @ incidence
    spread = incidence.T @ margins
    candidate = np.linalg.pinv(normal) @ spread
    return candidate - candidate.mean()


def two_teams(score_a, score_b):
    return MatchList.from_matches([Match(team_a="A", team_b="B", score_a=score_a, score_b=score_b)])


class TestBuildIncidence:
    def test_four_team_example(self, four_team_matches):
        incidence, margins = massey.build_incidence(four_team_matches)
        np.testing.assert_array_equal(
            incidence,
            [
                [1, 0, -1, 0],
                [1, 0, 0, -1],
                [0, 1, -1, 0],
                [0, 1, 0, -1],
            ],
        )
        np.testing.assert_array_equal(margins, [2, 3, 0, 1])

    def test_single_match(self):
        incidence, margins = massey.build_incidence(two_teams(1, 0))
        np.testing.assert_array_equal(incidence, [[1, -1]])
        np.testing.assert_array_equal(margins, [1])

    def test_draw_orients_to_lower_index(self):
        ml = MatchList.from_matches(
            [Match(team_a="C", team_b="B", score_a=1, score_b=1)], teams=["B", "C"]
        )
        incidence, margins = massey.build_incidence(ml)
        np.testing.assert_array_equal(incidence, [[1, -1]])  # +1 on B despite C listed first
        assert margins[0] == 0

    def test_rows_annihilate_ones(self):
        rng = np.random.default_rng(21)
        for _ in range(25):
            ml = random_connected_matches(rng)
            incidence, _ = massey.build_incidence(ml)
            np.testing.assert_array_equal(incidence @ np.ones(ml.n), np.zeros(ml.m))


class TestBuildSystem:
    def test_four_team_example(self, four_team_system):
        np.testing.assert_array_equal(
            four_team_system.normal_matrix,
            [
                [2, 0, -1, -1],
                [0, 2, -1, -1],
                [-1, -1, 2, 0],
                [-1, -1, 0, 2],
            ],
        )
        np.testing.assert_array_equal(four_team_system.team_spread, [5, 1, -2, -4])
        np.testing.assert_array_equal(four_team_system.points_for, [5, 3, 1, 1])
        np.testing.assert_array_equal(four_team_system.points_against, [0, 2, 3, 5])

    def test_normal_matrix_is_degrees_minus_adjacency(self, four_team_system):
        graph = four_team_system.graph
        np.testing.assert_array_equal(
            four_team_system.normal_matrix, np.diag(graph.degrees) - graph.adjacency
        )

    def test_isolated_team_row_is_zero(self):
        ml = MatchList.from_matches(
            [Match(team_a="A", team_b="B", score_a=2, score_b=1)], teams=["A", "B", "E"]
        )
        system = massey.build_system(ml)
        np.testing.assert_array_equal(system.normal_matrix[2], [0, 0, 0])
        np.testing.assert_array_equal(system.normal_matrix[:, 2], [0, 0, 0])

    def test_spread_sums_to_zero(self):
        rng = np.random.default_rng(33)
        for _ in range(25):
            system = massey.build_system(random_connected_matches(rng))
            assert abs(system.team_spread.sum()) <= linalg.TOL_RESIDUAL
            assert (system.match_margins >= 0).all()

    def test_cross_check_guard_fires_on_corruption(self, four_team_matches, monkeypatch):
        original = massey.build_incidence

        def corrupted(matches):
            incidence, margins = original(matches)
            margins = margins.copy()
            margins[0] += 1.0  # now disagrees with the direct accumulation
            return incidence, margins

        monkeypatch.setattr(massey, "build_incidence", corrupted)
        with pytest.raises(InternalMismatchError):
            massey.build_system(four_team_matches)


class TestSolveRatings:
    def test_four_team_example(self, four_team_system):
        rating = massey.solve_ratings(four_team_system)
        np.testing.assert_allclose(rating, [1.75, -0.25, -0.25, -1.25], atol=ATOL)

    def test_satisfies_original_system(self, four_team_system):
        rating = massey.solve_ratings(four_team_system)
        residual = four_team_system.normal_matrix @ rating - four_team_system.team_spread
        assert np.abs(residual).max() <= ATOL
        assert abs(rating.sum()) <= ATOL

    def test_full_round_robin_is_mean_spread(self):
        rng = np.random.default_rng(8)
        system = massey.build_system(full_round_robin_matches(rng, 4))
        rating = massey.solve_ratings(system)
        np.testing.assert_allclose(rating, system.team_spread / 4, atol=ATOL)

    def test_disconnected_rejected(self):
        ml = MatchList.from_matches(
            [
                Match(team_a="A", team_b="B", score_a=1, score_b=0),
                Match(team_a="C", team_b="D", score_a=1, score_b=0),
            ]
        )
        with pytest.raises(DisconnectedGraphError):
            massey.solve_ratings(massey.build_system(ml))

    def test_zero_game_team_reported(self):
        ml = MatchList.from_matches(
            [Match(team_a="A", team_b="B", score_a=1, score_b=0)], teams=["A", "B", "E"]
        )
        with pytest.raises(DisconnectedGraphError) as excinfo:
            massey.solve_ratings(massey.build_system(ml))
        assert excinfo.value.zero_game_teams == (2,)

    def test_row_replacement_choice_is_immaterial(self):
        rng = np.random.default_rng(55)
        for _ in range(30):
            system = massey.build_system(random_connected_matches(rng))
            rating = massey.solve_ratings(system)
            first_replaced = system.normal_matrix.copy()
            first_replaced[0, :] = 1.0
            rhs = system.team_spread.copy()
            rhs[0] = 0.0
            alt = linalg.solve_dense(first_replaced, rhs)
            assert np.abs(alt - rating).max() < ATOL

    def test_matches_minimum_norm_oracle(self):
        rng = np.random.default_rng(77)
        for _ in range(40):
            system = massey.build_system(random_connected_matches(rng))
            rating = massey.solve_ratings(system)
            oracle = minimum_norm_ratings(system.incidence, system.match_margins)
            assert np.abs(rating - oracle).max() < 1e-8

    def test_translation_invariance(self):
        rows = [("A", "B", 3, 1), ("B", "C", 2, 2), ("C", "A", 0, 5)]

        def ratings(offset):
            ml = MatchList.from_matches(
                [Match(team_a=a, team_b=b, score_a=sa + offset, score_b=sb + offset) for a, b, sa, sb in rows]
            )
            return massey.solve_ratings(massey.build_system(ml))

        np.testing.assert_array_equal(ratings(0), ratings(7))


class TestDecomposeRating:
    def test_four_team_example(self, four_team_system):
        rating = massey.solve_ratings(four_team_system)
        opponent, spread = massey.decompose_rating(four_team_system, rating)
        np.testing.assert_allclose(opponent, [-0.75, -0.75, 0.75, 0.75], atol=ATOL)
        np.testing.assert_allclose(spread, [2.5, 0.5, -1.0, -2.0], atol=ATOL)
        np.testing.assert_allclose(opponent + spread, rating, atol=ATOL)

    def test_all_draws_give_zero(self):
        ml = MatchList.from_matches(
            [
                Match(team_a="A", team_b="B", score_a=0, score_b=0),
                Match(team_a="B", team_b="C", score_a=0, score_b=0),
            ]
        )
        system = massey.build_system(ml)
        rating = massey.solve_ratings(system)
        opponent, spread = massey.decompose_rating(system, rating)
        np.testing.assert_allclose(rating, np.zeros(3), atol=ATOL)
        np.testing.assert_allclose(opponent, np.zeros(3), atol=ATOL)
        np.testing.assert_allclose(spread, np.zeros(3), atol=ATOL)

    def test_two_team_shutout(self):
        system = massey.build_system(two_teams(3, 0))
        rating = massey.solve_ratings(system)
        opponent, spread = massey.decompose_rating(system, rating)
        np.testing.assert_allclose(rating, [1.5, -1.5], atol=ATOL)
        np.testing.assert_allclose(opponent, [-1.5, 1.5], atol=ATOL)
        np.testing.assert_allclose(spread, [3.0, -3.0], atol=ATOL)

    def test_zero_games_rejected(self):
        ml = MatchList.from_matches(
            [Match(team_a="A", team_b="B", score_a=1, score_b=0)], teams=["A", "B", "E"]
        )
        system = massey.build_system(ml)
        with pytest.raises(ZeroGamesError):
            massey.decompose_rating(system, np.zeros(3))


class TestOffenseDefense:
    def test_four_team_example(self, four_team_system):
        rating = massey.solve_ratings(four_team_system)
        offense, defense = massey.offense_defense(four_team_system, rating)
        np.testing.assert_allclose(offense, [1.875, 0.875, -0.125, -0.125], atol=ATOL)
        np.testing.assert_allclose(defense, [-0.125, -1.125, -0.125, -1.125], atol=ATOL)

    def test_partition_orthogonality(self, four_team_system):
        # the rhs of the defense system is orthogonal to the +/-1 partition
        # vector, which is exactly what makes the singular system solvable
        rating = massey.solve_ratings(four_team_system)
        sign = np.array([1.0, 1.0, -1.0, -1.0])
        rhs = four_team_system.graph.degrees * rating - four_team_system.points_for
        assert abs(sign @ rhs) <= ATOL
        _, defense = massey.offense_defense(four_team_system, rating)
        assert abs(sign @ defense) <= ATOL

    def test_cyclic_triangle(self):
        ml = MatchList.from_matches(
            [
                Match(team_a="A", team_b="B", score_a=1, score_b=0),
                Match(team_a="B", team_b="C", score_a=1, score_b=0),
                Match(team_a="C", team_b="A", score_a=1, score_b=0),
            ]
        )
        system = massey.build_system(ml)
        rating = massey.solve_ratings(system)
        np.testing.assert_allclose(rating, np.zeros(3), atol=ATOL)
        offense, defense = massey.offense_defense(system, rating)
        np.testing.assert_allclose(offense, [0.25, 0.25, 0.25], atol=ATOL)
        np.testing.assert_allclose(defense, [-0.25, -0.25, -0.25], atol=ATOL)
        np.testing.assert_allclose(offense + defense, rating, atol=ATOL)

    def test_offense_plus_defense_is_rating(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            system = massey.build_system(random_connected_matches(rng, n_max=6, m_max=12))
            rating = massey.solve_ratings(system)
            offense, defense = massey.offense_defense(system, rating)
            np.testing.assert_allclose(offense + defense, rating, atol=ATOL)

    def test_disconnected_rejected(self):
        ml = MatchList.from_matches(
            [
                Match(team_a="A", team_b="B", score_a=1, score_b=0),
                Match(team_a="C", team_b="D", score_a=1, score_b=0),
            ]
        )
        system = massey.build_system(ml)
        with pytest.raises(DisconnectedGraphError):
            massey.offense_defense(system, np.zeros(4))


class TestEdgeFlows:
    def test_four_team_example(self, four_team_system):
        rating = massey.solve_ratings(four_team_system)
        flows = massey.edge_flows(four_team_system, rating)
        as_dict = {(i, j): flow for i, j, flow in flows}
        assert set(as_dict) == {(0, 2), (0, 3), (1, 2), (1, 3)}
        assert as_dict[(0, 2)] == pytest.approx(2.0, abs=ATOL)
        assert as_dict[(0, 3)] == pytest.approx(3.0, abs=ATOL)
        assert as_dict[(1, 2)] == pytest.approx(0.0, abs=ATOL)
        assert as_dict[(1, 3)] == pytest.approx(1.0, abs=ATOL)

    def test_node_balance_matches_spread(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            system = massey.build_system(random_connected_matches(rng, n_max=6, m_max=12))
            rating = massey.solve_ratings(system)
            outflow = np.zeros(system.n)
            for i, j, flow in massey.edge_flows(system, rating):
                outflow[i] += flow
                outflow[j] -= flow
            np.testing.assert_allclose(outflow, system.team_spread, atol=ATOL)


class TestKatzRating:
    def test_zero_alpha_returns_beta(self):
        a = np.array([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(massey.katz_rating(a, 0.0, [3.0, -1.0]), [3.0, -1.0], atol=ATOL)

    def test_two_team_hand_case(self):
        a = np.array([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(massey.katz_rating(a, 0.5, [1.0, 0.0]), [4 / 3, 2 / 3], atol=ATOL)

    def test_regular_graph_critical_alpha_is_singular(self, four_team_system):
        # every team played k=2 games, so alpha = 1/2 hits an eigenvalue
        adjacency = four_team_system.graph.adjacency.astype(float)
        beta = four_team_system.team_spread / 2.0
        with pytest.raises(SingularMatrixError):
            massey.katz_rating(adjacency, 0.5, beta)


class TestSpectralGapBound:
    def test_four_team_example(self, four_team_system):
        rating = massey.solve_ratings(four_team_system)
        lhs, rhs = massey.spectral_gap_bound(four_team_system, rating)
        assert lhs == pytest.approx(np.sqrt(0.625), abs=1e-9)
        assert rhs == pytest.approx(np.sqrt(46) * 2 / 8, abs=1e-9)
        assert lhs <= rhs

    def test_complete_graph_reaches_mean_spread(self):
        rng = np.random.default_rng(2)
        system = massey.build_system(full_round_robin_matches(rng, 6))
        rating = massey.solve_ratings(system)
        lhs, rhs = massey.spectral_gap_bound(system, rating)
        assert lhs <= 1e-9

    def test_bound_holds_on_random_partial_seasons(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            ml = random_connected_matches(rng, n_max=8, m_max=14, unique_pairs=True)
            system = massey.build_system(ml)
            rating = massey.solve_ratings(system)
            lhs, rhs = massey.spectral_gap_bound(system, rating)
            assert lhs <= rhs + 1e-9

    def test_disconnected_rejected(self):
        ml = MatchList.from_matches(
            [
                Match(team_a="A", team_b="B", score_a=1, score_b=0),
                Match(team_a="C", team_b="D", score_a=1, score_b=0),
            ]
        )
        system = massey.build_system(ml)
        with pytest.raises(DisconnectedGraphError):
            massey.spectral_gap_bound(system, np.zeros(4))


class TestBuildReport:
    def test_report_consistency(self, four_team_system):
        report = massey.build_report(four_team_system)
        assert report.diagnostics.connected
        assert report.diagnostics.bipartite
        assert report.diagnostics.lambda2 == pytest.approx(2.0, abs=1e-8)
        np.testing.assert_allclose(
            report.opponent_component + report.spread_component, report.rating, atol=ATOL
        )
        np.testing.assert_allclose(report.offense + report.defense, report.rating, atol=ATOL)
        assert abs(report.rating.sum()) <= ATOL
