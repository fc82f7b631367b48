"""Exception hierarchy shared by all rank_forge modules."""

from __future__ import annotations


class RankForgeError(Exception):
    """Base class for every error raised by this package."""


class SingularMatrixError(RankForgeError):
    """A pivot fell below tolerance during elimination.

    For rating systems this usually means the caller solved the raw
    rank-deficient system instead of the row-replaced one.
    """

    def __init__(self, message: str = "matrix is singular to working precision", *, pivot_index: int | None = None):
        super().__init__(message)
        self.pivot_index = pivot_index


class NotSymmetricError(RankForgeError):
    """Input matrix is not symmetric within tolerance."""


class ConvergenceError(RankForgeError):
    """An iterative method did not converge within its iteration budget."""


class DisconnectedGraphError(RankForgeError):
    """The match graph is disconnected, so the requested rating is undefined."""

    def __init__(self, message: str = "match graph is not connected", *, zero_game_teams: tuple[int, ...] = ()):
        super().__init__(message)
        self.zero_game_teams = zero_game_teams


class OddTeamCountError(RankForgeError):
    """Round-robin scheduling needs an even number of teams."""


class NeverConnectedError(RankForgeError):
    """No prefix of the schedule yields a connected match graph."""


class NeverNonBipartiteError(RankForgeError):
    """No prefix of the schedule contains an odd cycle."""


class InternalMismatchError(RankForgeError):
    """Cross-check of two independent constructions disagreed (internal bug guard)."""


class ZeroGamesError(RankForgeError):
    """A team with zero games makes the per-game decomposition undefined."""

    def __init__(self, team: int):
        super().__init__(f"team index {team} played zero games")
        self.team = team


class RawUndefinedError(RankForgeError):
    """Raw strength is 0/0 for a played pair; Laplace smoothing avoids this."""

    def __init__(self, pair: tuple[int, int]):
        super().__init__(f"raw strength undefined for pair {pair}: 0-0 aggregate score")
        self.pair = pair


class NotIrreducibleError(RankForgeError):
    """Strength matrix is reducible; the Perron rating is undefined."""


class ParseError(RankForgeError):
    """Malformed input text; carries the 1-based line number."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason
