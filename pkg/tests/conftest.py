"""Shared fixtures: the 4-team worked example used across the suite."""

from __future__ import annotations

import pytest

from rank_forge.competition import Match, MatchList
from rank_forge.massey import MasseySystem, build_system

FOUR_TEAM_ROWS = [
    ("A", "C", 2, 0),
    ("A", "D", 3, 0),
    ("B", "C", 1, 1),
    ("B", "D", 2, 1),
]


@pytest.fixture
def four_team_matches() -> MatchList:
    """Two strong teams beating two weak ones, with one draw; registry A,B,C,D."""
    return MatchList.from_matches(
        [Match(team_a=a, team_b=b, score_a=sa, score_b=sb) for a, b, sa, sb in FOUR_TEAM_ROWS],
        teams=["A", "B", "C", "D"],
    )


@pytest.fixture
def four_team_system(four_team_matches) -> MasseySystem:
    return build_system(four_team_matches)
