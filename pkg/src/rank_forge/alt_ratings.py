"""Alternative rating methods: Keener, offense-defense balancing, Elo."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from rank_forge.competition import MatchList
from rank_forge.errors import ConvergenceError, NotIrreducibleError, RawUndefinedError

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True)
class StrengthMatrix:
    """Pairwise strengths in [0, 1]; played pairs satisfy A_ij + A_ji = 1.

    Unplayed pairs hold 0 on both sides, so "played" is recoverable from
    the entries themselves.
    """

    n: int
    entries: np.ndarray

    def __post_init__(self):
        a = self.entries
        if a.shape != (self.n, self.n):
            raise ValueError("entries shape does not match team count")
        if (a < 0).any() or not np.isfinite(a).all():
            raise ValueError("strengths must be finite and nonnegative")
        if (a.diagonal() != 0).any():
            raise ValueError("strength diagonal must be zero")
        pair_sums = a + a.T
        played = pair_sums > 0
        if np.abs(pair_sums[played] - 1.0).max(initial=0.0) > 1e-9:
            raise ValueError("played pairs must have strengths summing to 1")
        a.setflags(write=False)

    def played_mask(self) -> np.ndarray:
        return (self.entries + self.entries.T) > 0


@dataclass(frozen=True)
class EloParams:
    """Update gain, logistic scale, and the common starting rating."""

    kappa: float = 25.0
    zeta: float = 400.0
    initial_rating: float = 1500.0

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.zeta <= 0:
            raise ValueError("zeta must be positive")


def strength_matrix(matches: MatchList, smoothing: str = "laplace") -> StrengthMatrix:
    """Aggregate scores into pairwise strengths.

    With ``raw``, A_ij = S_ij / (S_ij + S_ji) where S_ij is the total
    points i scored against j; a played pair whose aggregate is 0-0 raises
    RawUndefinedError.  With ``laplace``, A_ij = (S_ij + 1)/(S_ij + S_ji + 2),
    which is always defined.  Unplayed pairs stay 0 on both sides.
    """
    if smoothing not in ("raw", "laplace"):
        raise ValueError(f"unknown smoothing {smoothing!r}")
    n = matches.n
    index = matches.index
    scored = np.zeros((n, n), dtype=np.float64)
    played = np.zeros((n, n), dtype=bool)
    for match in matches.matches:
        i, j = index[match.team_a], index[match.team_b]
        scored[i, j] += match.score_a
        scored[j, i] += match.score_b
        played[i, j] = played[j, i] = True

    entries = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            if not played[i, j]:
                continue
            total = scored[i, j] + scored[j, i]
            if smoothing == "raw":
                if total == 0:
                    raise RawUndefinedError((i, j))
                entries[i, j] = scored[i, j] / total
                entries[j, i] = scored[j, i] / total
            else:
                entries[i, j] = (scored[i, j] + 1.0) / (total + 2.0)
                entries[j, i] = (scored[j, i] + 1.0) / (total + 2.0)
    return StrengthMatrix(n=n, entries=entries)


def _strength_entries(strengths) -> np.ndarray:
    """Accept a StrengthMatrix or any nonnegative zero-diagonal matrix."""
    if isinstance(strengths, StrengthMatrix):
        a = strengths.entries
    else:
        a = np.array(strengths, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.isfinite(a).all() or (a < 0).any():
            raise ValueError("strengths must be finite and nonnegative")
        if (a.diagonal() != 0).any():
            raise ValueError("strength diagonal must be zero")
    if a.shape[0] == 0:
        raise ValueError("empty strength matrix")
    return a


def _is_irreducible(a: np.ndarray) -> bool:
    """Strong connectivity of the positive-entry digraph."""
    n = a.shape[0]
    if n == 1:
        return True
    for mat in (a, a.T):
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in np.nonzero(mat[u] > 0)[0]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(int(v))
        if not seen.all():
            return False
    return True


def keener_rating(
    strengths,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[np.ndarray, float]:
    """Perron eigenvector of the strength matrix, normalized to sum 1.

    Power iteration from the uniform vector.  The iteration actually runs
    on A + I: the shift keeps the Perron vector unchanged while breaking
    the period-2 oscillation that raw power iteration hits on bipartite
    strength patterns (already the 2-team case).  The returned lambda is
    the Rayleigh estimate with the original matrix.
    """
    a = _strength_entries(strengths)
    n = a.shape[0]
    if not _is_irreducible(a):
        raise NotIrreducibleError("strength matrix is reducible; connect the schedule first")
    r = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = a @ r + r  # (A + I) r
        nxt /= nxt.sum()
        delta = np.abs(nxt - r).max()
        r = nxt
        if delta < tol:
            lam = float(r @ (a @ r) / (r @ r))
            if np.abs(a @ r - lam * r).max() < 10.0 * tol:
                return r, lam
    raise ConvergenceError(f"power iteration did not settle within {max_iter} iterations")


def odm_rating(
    strengths,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[np.ndarray, np.ndarray]:
    """Mutually reciprocal offense/defense scores via alternating updates.

    Iterates o <- A d^(-1), d <- A^T o^(-1) from d = ones until both
    vectors and the fixed-point residuals are below ``tol``.  The scalar
    family (o*c, d/c) is pinned by normalizing the geometric mean of o
    to 1.  Non-convergence signals a matrix without total support.
    """
    a = _strength_entries(strengths)
    n = a.shape[0]
    offense = np.full(n, np.nan)
    defense = np.ones(n)
    # blowup of the scalings (missing total support) is detected explicitly,
    # so the overflow/divide warnings on the way there are expected noise
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for _ in range(max_iter):
            new_offense = a @ (1.0 / defense)
            if not np.isfinite(new_offense).all() or (new_offense <= 0).any():
                raise ConvergenceError("offense-defense iteration left the positive cone")
            new_defense = a.T @ (1.0 / new_offense)
            if not np.isfinite(new_defense).all() or (new_defense <= 0).any():
                raise ConvergenceError("offense-defense iteration left the positive cone")
            settled = (
                np.isfinite(offense).all()
                and np.abs(new_offense - offense).max() < tol
                and np.abs(new_defense - defense).max() < tol
            )
            offense, defense = new_offense, new_defense
            if settled:
                residual_o = np.abs(offense - a @ (1.0 / defense)).max()
                residual_d = np.abs(defense - a.T @ (1.0 / offense)).max()
                if residual_o < tol and residual_d < tol:
                    gauge = math.exp(np.log(offense).mean())
                    return offense / gauge, defense * gauge
    raise ConvergenceError(
        f"offense-defense iteration did not settle within {max_iter} iterations "
        "(matrix may lack total support)"
    )


def elo_expected(rating_i: float, rating_j: float, zeta: float) -> float:
    """Expected score of i against j: logistic in the rating difference."""
    return 1.0 / (1.0 + 10.0 ** (-(rating_i - rating_j) / zeta))


def elo_update(
    rating_i: float,
    rating_j: float,
    score_ij: float,
    params: EloParams = EloParams(),
) -> tuple[float, float]:
    """One match update; score_ij is 1 for an i win, 0.5 draw, 0 loss."""
    if not 0.0 <= score_ij <= 1.0:
        raise ValueError(f"score must lie in [0, 1], got {score_ij!r}")
    mu_ij = elo_expected(rating_i, rating_j, params.zeta)
    mu_ji = elo_expected(rating_j, rating_i, params.zeta)
    new_i = rating_i + params.kappa * (score_ij - mu_ij)
    new_j = rating_j + params.kappa * ((1.0 - score_ij) - mu_ji)
    return new_i, new_j


def elo_run(matches: MatchList, params: EloParams = EloParams()) -> np.ndarray:
    """Fold the update over matches in (day, input-order) sequence.

    Scores come from the result only: win 1, draw 0.5, loss 0.  The order
    within a day matters and is preserved from the input.
    """
    index = matches.index
    ratings = np.full(matches.n, params.initial_rating)
    for match in matches.in_play_order():
        i, j = index[match.team_a], index[match.team_b]
        if match.score_a > match.score_b:
            score = 1.0
        elif match.score_a < match.score_b:
            score = 0.0
        else:
            score = 0.5
        ratings[i], ratings[j] = elo_update(ratings[i], ratings[j], score, params)
    return ratings
