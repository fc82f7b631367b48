"""Match data model, match-graph diagnostics, and round-robin schedules."""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from rank_forge.errors import (
    DisconnectedGraphError,
    NeverConnectedError,
    NeverNonBipartiteError,
    OddTeamCountError,
)


@dataclass(frozen=True)
class Match:
    """One game: two distinct teams and their nonnegative final scores.

    ``day`` is optional; when absent the match is ordered by its position
    in the containing list.
    """

    team_a: str
    team_b: str
    score_a: float
    score_b: float
    day: Optional[int] = None

    def __post_init__(self):
        if self.team_a == self.team_b:
            raise ValueError(f"a team cannot play itself: {self.team_a!r}")
        for label, score in (("score_a", self.score_a), ("score_b", self.score_b)):
            if not math.isfinite(score) or score < 0:
                raise ValueError(f"{label} must be finite and nonnegative, got {score!r}")
        if self.day is not None and (not isinstance(self.day, int) or self.day < 1):
            raise ValueError(f"day must be a positive integer, got {self.day!r}")

    @property
    def is_draw(self) -> bool:
        return self.score_a == self.score_b


@dataclass(frozen=True)
class MatchList:
    """Ordered team registry plus the matches played between those teams."""

    teams: tuple[str, ...]
    matches: tuple[Match, ...]

    def __post_init__(self):
        if len(set(self.teams)) != len(self.teams):
            raise ValueError("team registry contains duplicates")
        known = set(self.teams)
        for match in self.matches:
            if match.team_a not in known or match.team_b not in known:
                raise ValueError(f"match references unregistered team: {match}")

    @classmethod
    def from_matches(cls, matches: Iterable[Match], teams: Iterable[str] = ()) -> "MatchList":
        """Build with the registry in first-appearance order."""
        registry: list[str] = []
        seen: set[str] = set()
        for team in teams:
            if team not in seen:
                seen.add(team)
                registry.append(team)
        collected = tuple(matches)
        for match in collected:
            for team in (match.team_a, match.team_b):
                if team not in seen:
                    seen.add(team)
                    registry.append(team)
        return cls(teams=tuple(registry), matches=collected)

    @cached_property
    def index(self) -> dict[str, int]:
        return {team: i for i, team in enumerate(self.teams)}

    @property
    def n(self) -> int:
        return len(self.teams)

    @property
    def m(self) -> int:
        return len(self.matches)

    @property
    def draw_count(self) -> int:
        return sum(1 for match in self.matches if match.is_draw)

    @property
    def has_explicit_days(self) -> bool:
        return bool(self.matches) and all(match.day is not None for match in self.matches)

    def in_play_order(self) -> list[Match]:
        """Matches sorted by (day, input order); missing days default to input order."""
        keyed = [
            (match.day if match.day is not None else k + 1, k, match)
            for k, match in enumerate(self.matches)
        ]
        keyed.sort(key=lambda item: (item[0], item[1]))
        return [match for _, _, match in keyed]


@dataclass(frozen=True)
class MatchGraph:
    """Symmetric match-count matrix with per-team game counts on the side."""

    n: int
    adjacency: np.ndarray  # integer, symmetric, zero diagonal
    degrees: np.ndarray  # row sums of adjacency

    def __post_init__(self):
        a = self.adjacency
        if a.shape != (self.n, self.n):
            raise ValueError("adjacency shape does not match team count")
        if (a.diagonal() != 0).any():
            raise ValueError("adjacency diagonal must be zero")
        if (a != a.T).any() or (a < 0).any():
            raise ValueError("adjacency must be symmetric and nonnegative")
        if (self.degrees != a.sum(axis=1)).any():
            raise ValueError("degrees must equal adjacency row sums")
        a.setflags(write=False)
        self.degrees.setflags(write=False)

    def zero_game_teams(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.degrees == 0)[0])


def build_match_graph(matches: MatchList) -> MatchGraph:
    """Count matches per unordered pair; degrees are games played per team."""
    n = matches.n
    adjacency = np.zeros((n, n), dtype=np.int64)
    index = matches.index
    for match in matches.matches:
        i, j = index[match.team_a], index[match.team_b]
        adjacency[i, j] += 1
        adjacency[j, i] += 1
    return MatchGraph(n=n, adjacency=adjacency, degrees=adjacency.sum(axis=1))


def is_connected(graph: MatchGraph) -> bool:
    """Breadth-first reachability over pairs that played at least once."""
    n = graph.n
    if n <= 1:
        return True
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    adjacency = graph.adjacency
    while queue:
        u = queue.popleft()
        for v in np.nonzero(adjacency[u])[0]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(int(v))
    return count == n


def bipartition(graph: MatchGraph) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Two-color a connected graph by BFS.

    Returns (U, V) index tuples with team 0 in U, or None when the graph
    contains an odd cycle.  Raises DisconnectedGraphError on disconnected
    input.
    """
    if not is_connected(graph):
        raise DisconnectedGraphError("bipartition requires a connected match graph")
    n = graph.n
    color = [-1] * n
    color[0] = 0
    queue = deque([0])
    adjacency = graph.adjacency
    while queue:
        u = queue.popleft()
        for v in np.nonzero(adjacency[u])[0]:
            v = int(v)
            if color[v] == -1:
                color[v] = 1 - color[u]
                queue.append(v)
            elif color[v] == color[u]:
                return None
    part_u = tuple(i for i in range(n) if color[i] == 0)
    part_v = tuple(i for i in range(n) if color[i] == 1)
    return part_u, part_v


Pair = tuple[int, int]


@dataclass(frozen=True)
class Schedule:
    """A sequence of days; each day is a perfect matching of all ``n`` teams."""

    n: int
    days: tuple[tuple[Pair, ...], ...]

    def __post_init__(self):
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError("schedule needs an even team count of at least 2")
        seen_pairs: set[Pair] = set()
        for day_no, day in enumerate(self.days, start=1):
            covered: set[int] = set()
            for pair in day:
                i, j = pair
                if not (0 <= i < j < self.n):
                    raise ValueError(f"day {day_no}: pair {pair} is not normalized within range")
                if i in covered or j in covered:
                    raise ValueError(f"day {day_no}: team paired twice")
                covered.update(pair)
                if pair in seen_pairs:
                    raise ValueError(f"day {day_no}: pair {pair} repeats an earlier day")
                seen_pairs.add(pair)
            if len(covered) != self.n:
                raise ValueError(f"day {day_no}: not a perfect matching")


def round_robin_schedule(n: int) -> Schedule:
    """Circle-method single round robin: n-1 days, every pair exactly once.

    Team n-1 stays fixed; the rest rotate one place per day.  Deterministic.
    """
    if n % 2 != 0:
        raise OddTeamCountError(f"round robin needs an even team count, got {n}")
    if n < 4:
        raise ValueError(f"round robin needs at least 4 teams, got {n}")
    ring = list(range(n - 1))
    fixed = n - 1
    days: list[tuple[Pair, ...]] = []
    for _ in range(n - 1):
        pairs = [(ring[0], fixed)]
        for k in range(1, n // 2):
            a, b = ring[k], ring[n - 1 - k]
            pairs.append((min(a, b), max(a, b)))
        days.append(tuple(pairs))
        ring = ring[1:] + ring[:1]
    return Schedule(n=n, days=tuple(days))


def shuffle_days(schedule: Schedule, seed: int) -> Schedule:
    """Seeded permutation of day order; used by the schedule property tests."""
    days = list(schedule.days)
    random.Random(seed).shuffle(days)
    return Schedule(n=schedule.n, days=tuple(days))


class _UnionFind:
    """Union-find with parity, so odd cycles are detected on edge insert."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.parity = [0] * n  # parity of path to root
        self.components = n

    def find(self, x: int) -> tuple[int, int]:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        parity = 0
        for node in reversed(path):
            parity ^= self.parity[node]
            self.parent[node] = x
            self.parity[node] = parity
        return x, self.parity[path[0]] if path else 0

    def add_edge(self, a: int, b: int) -> bool:
        """Insert edge; returns True when it closes an odd cycle."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return pa == pb
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
            pa, pb = pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ 1
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.components -= 1
        return False


def days_to_connected(schedule: Schedule) -> int:
    """Smallest k such that the union of the first k matchings is connected."""
    uf = _UnionFind(schedule.n)
    for day_no, day in enumerate(schedule.days, start=1):
        for i, j in day:
            uf.add_edge(i, j)
        if uf.components == 1:
            return day_no
    raise NeverConnectedError(f"schedule never connects within {len(schedule.days)} days")


def days_to_nonbipartite(schedule: Schedule) -> int:
    """Smallest k such that the union of the first k matchings has an odd cycle."""
    uf = _UnionFind(schedule.n)
    for day_no, day in enumerate(schedule.days, start=1):
        odd = False
        for i, j in day:
            odd = uf.add_edge(i, j) or odd
        if odd:
            return day_no
    raise NeverNonBipartiteError(f"no odd cycle within {len(schedule.days)} days")


def first_connected_day(matches: MatchList) -> Optional[int]:
    """Smallest day value whose cumulative match graph is connected.

    Works on dated match lists (calendar days, not necessarily perfect
    matchings).  Returns None when the full list never connects.
    """
    return _first_day(matches, want_odd_cycle=False)


def first_odd_cycle_day(matches: MatchList) -> Optional[int]:
    """Smallest day value whose cumulative match graph contains an odd cycle."""
    return _first_day(matches, want_odd_cycle=True)


def _first_day(matches: MatchList, *, want_odd_cycle: bool) -> Optional[int]:
    by_day: dict[int, list[Pair]] = {}
    index = matches.index
    for k, match in enumerate(matches.matches):
        day = match.day if match.day is not None else k + 1
        i, j = index[match.team_a], index[match.team_b]
        by_day.setdefault(day, []).append((min(i, j), max(i, j)))
    uf = _UnionFind(matches.n)
    odd = False
    for day in sorted(by_day):
        for i, j in by_day[day]:
            odd = uf.add_edge(i, j) or odd
        if want_odd_cycle and odd:
            return day
        if not want_odd_cycle and uf.components == 1:
            return day
    return None
