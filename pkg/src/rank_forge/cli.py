"""Command-line front end: ingestion, method dispatch, report serialization.

Subcommands: ``rate`` (CSV of matches -> ratings), ``graph-check``
(connectivity diagnostics), ``network rate`` (edge-list CSV -> ratings via
the competition transform), ``simulate`` (round-robin schedule
diagnostics).  Exit codes: 0 ok, 2 input parse error, 3 disconnected
graph, 4 convergence failure, 5 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from rank_forge import alt_ratings, competition, linalg, massey, netflow
from rank_forge.alt_ratings import EloParams
from rank_forge.competition import Match, MatchList
from rank_forge.errors import (
    ConvergenceError,
    DisconnectedGraphError,
    NotIrreducibleError,
    ParseError,
    RankForgeError,
)
from rank_forge.netflow import WeightedDigraph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DISCONNECTED = 3
EXIT_NO_CONVERGENCE = 4
EXIT_CONFIG = 5

MATCH_HEADER = ("day", "team_a", "team_b", "score_a", "score_b")
EDGE_HEADER = ("source", "target", "weight")

# external CSV column names for the rating table
_CSV_COLUMNS = {
    "team": "team",
    "rating": "rating",
    "opponent_component": "r1",
    "spread_component": "r2",
    "offense": "o",
    "defense": "d",
}


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs; validated before any work starts."""

    command: str  # rate | graph-check | network-rate | simulate
    input_path: str | None = None
    method: str = "massey"
    smoothing: str = "laplace"
    tol: float = alt_ratings.DEFAULT_TOL
    max_iter: int = alt_ratings.DEFAULT_MAX_ITER
    elo: EloParams = field(default_factory=EloParams)
    output_format: str = "table"
    seed: int | None = None
    teams: int | None = None  # simulate only

    def __post_init__(self):
        if self.command not in ("rate", "graph-check", "network-rate", "simulate"):
            raise ValueError(f"unknown command {self.command!r}")
        if self.method not in netflow.RATING_METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.smoothing not in ("raw", "laplace"):
            raise ValueError(f"unknown smoothing {self.smoothing!r}")
        if self.output_format not in ("json", "csv", "table"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter <= 0:
            raise ValueError("max-iter must be positive")
        if self.command == "simulate":
            if self.teams is None:
                raise ValueError("simulate requires --teams")
        elif self.input_path is None:
            raise ValueError(f"{self.command} requires --input")


# ---------------------------------------------------------------------------
# CSV ingestion and serialization
# ---------------------------------------------------------------------------


def _rows(text: str) -> list[tuple[int, list[str]]]:
    """CSV rows with their 1-based line numbers; blank lines skipped."""
    reader = csv.reader(text.splitlines())
    out = []
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        out.append((lineno, [cell.strip() for cell in row]))
    return out


def parse_matches_csv(text: str) -> MatchList:
    """Parse ``day,team_a,team_b,score_a,score_b`` records.

    The day column may be omitted entirely or left blank per row (input
    order then stands in for the day).  Teams register in first-appearance
    order.
    """
    rows = _rows(text)
    if not rows:
        raise ParseError(1, "missing header")
    header_line, header = rows[0]
    cols = tuple(name.lower() for name in header)
    if cols == MATCH_HEADER:
        has_day = True
    elif cols == MATCH_HEADER[1:]:
        has_day = False
    else:
        raise ParseError(header_line, f"expected header {','.join(MATCH_HEADER)}, got {','.join(header)}")

    matches = []
    for lineno, row in rows[1:]:
        if len(row) != len(cols):
            raise ParseError(lineno, f"expected {len(cols)} fields, got {len(row)}")
        if has_day:
            day_text, team_a, team_b, score_a_text, score_b_text = row
        else:
            team_a, team_b, score_a_text, score_b_text = row
            day_text = ""
        if not team_a or not team_b:
            raise ParseError(lineno, "empty team name")
        day = None
        if day_text:
            try:
                day = int(day_text)
            except ValueError:
                raise ParseError(lineno, f"day must be an integer, got {day_text!r}") from None
        scores = []
        for label, cell in (("score_a", score_a_text), ("score_b", score_b_text)):
            try:
                scores.append(float(cell))
            except ValueError:
                raise ParseError(lineno, f"{label} must be a number, got {cell!r}") from None
        try:
            matches.append(Match(team_a=team_a, team_b=team_b, score_a=scores[0], score_b=scores[1], day=day))
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    return MatchList.from_matches(matches)


def format_matches_csv(matches: MatchList) -> str:
    """Inverse of parse_matches_csv (parse(format(x)) == x)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(MATCH_HEADER)
    for match in matches.matches:
        writer.writerow(
            [
                "" if match.day is None else match.day,
                match.team_a,
                match.team_b,
                repr(match.score_a),
                repr(match.score_b),
            ]
        )
    return buffer.getvalue()


def parse_edges_csv(text: str) -> WeightedDigraph:
    """Parse ``source,target,weight`` records into a weighted digraph.

    Duplicate directed edges are summed; self-loops are dropped and
    counted on the returned digraph.
    """
    rows = _rows(text)
    if not rows:
        raise ParseError(1, "missing header")
    header_line, header = rows[0]
    if tuple(name.lower() for name in header) != EDGE_HEADER:
        raise ParseError(header_line, f"expected header {','.join(EDGE_HEADER)}, got {','.join(header)}")
    edges = []
    for lineno, row in rows[1:]:
        if len(row) != 3:
            raise ParseError(lineno, f"expected 3 fields, got {len(row)}")
        source, target, weight_text = row
        if not source or not target:
            raise ParseError(lineno, "empty node name")
        try:
            weight = float(weight_text)
        except ValueError:
            raise ParseError(lineno, f"weight must be a number, got {weight_text!r}") from None
        if not math.isfinite(weight) or weight <= 0:
            raise ParseError(lineno, f"weight must be positive and finite, got {weight_text!r}")
        edges.append((source, target, weight))
    return WeightedDigraph.from_edges(edges)


# ---------------------------------------------------------------------------
# Report payloads
# ---------------------------------------------------------------------------


def _round6(x: float) -> float:
    return round(float(x), 6) + 0.0  # +0.0 folds -0.0 into 0.0


def _rating_rows(teams: tuple[str, ...], columns: dict[str, np.ndarray]) -> list[dict]:
    rows = []
    for i, team in enumerate(teams):
        row: dict = {"team": team}
        for name, values in columns.items():
            row[name] = _round6(values[i])
        rows.append(row)
    return rows


def _massey_payload(matches: MatchList) -> dict:
    system = massey.build_system(matches)
    try:
        report = massey.build_report(system)
    except DisconnectedGraphError as exc:
        raise _named_disconnection(exc, matches) from None
    rating = report.rating
    flows = [
        {"team_a": matches.teams[i], "team_b": matches.teams[j], "flow": _round6(flow)}
        for i, j, flow in massey.edge_flows(system, rating)
    ]
    diag = report.diagnostics
    return {
        "method": "massey",
        "teams": list(matches.teams),
        "matches": matches.m,
        "draws": matches.draw_count,
        "ratings": _rating_rows(
            matches.teams,
            {
                "rating": rating,
                "opponent_component": report.opponent_component,
                "spread_component": report.spread_component,
                "offense": report.offense,
                "defense": report.defense,
            },
        ),
        "flows": flows,
        "diagnostics": {
            "connected": diag.connected,
            "bipartite": diag.bipartite,
            "lambda2": _round6(diag.lambda2),
            "bound_lhs": _round6(diag.bound_lhs),
            "bound_rhs": _round6(diag.bound_rhs),
        },
    }


def _named_disconnection(exc: DisconnectedGraphError, matches: MatchList) -> DisconnectedGraphError:
    if not exc.zero_game_teams:
        return exc
    names = ", ".join(matches.teams[i] for i in exc.zero_game_teams)
    return DisconnectedGraphError(
        f"match graph is not connected; teams with zero games: {names}",
        zero_game_teams=exc.zero_game_teams,
    )


def _rate_payload(matches: MatchList, config: RunConfig) -> dict:
    base = {
        "method": config.method,
        "teams": list(matches.teams),
        "matches": matches.m,
        "draws": matches.draw_count,
    }
    if config.method == "massey":
        return _massey_payload(matches)
    if config.method == "keener":
        strengths = alt_ratings.strength_matrix(matches, config.smoothing)
        rating, perron = alt_ratings.keener_rating(strengths, tol=config.tol, max_iter=config.max_iter)
        base["smoothing"] = config.smoothing
        base["perron_value"] = _round6(perron)
        base["ratings"] = _rating_rows(matches.teams, {"rating": rating})
        return base
    if config.method == "odm":
        strengths = alt_ratings.strength_matrix(matches, config.smoothing)
        offense, defense = alt_ratings.odm_rating(strengths, tol=config.tol, max_iter=config.max_iter)
        base["smoothing"] = config.smoothing
        base["ratings"] = _rating_rows(
            matches.teams,
            {"rating": offense / defense, "offense": offense, "defense": defense},
        )
        return base
    ratings = alt_ratings.elo_run(matches, config.elo)
    base["params"] = {
        "kappa": config.elo.kappa,
        "zeta": config.elo.zeta,
        "initial_rating": config.elo.initial_rating,
    }
    base["ratings"] = _rating_rows(matches.teams, {"rating": ratings})
    return base


def _graph_check_payload(matches: MatchList) -> dict:
    graph = competition.build_match_graph(matches)
    connected = competition.is_connected(graph)
    payload: dict = {
        "teams": list(matches.teams),
        "matches": matches.m,
        "connected": connected,
        "zero_game_teams": [matches.teams[i] for i in graph.zero_game_teams()],
        "bipartite": None,
        "partition": None,
        "lambda2": None,
        "days_to_connected": None,
        "days_to_nonbipartite": None,
    }
    if connected and graph.n >= 2:
        parts = competition.bipartition(graph)
        payload["bipartite"] = parts is not None
        if parts is not None:
            payload["partition"] = {
                "first": [matches.teams[i] for i in parts[0]],
                "second": [matches.teams[i] for i in parts[1]],
            }
    if graph.n >= 2:
        laplacian = np.diag(graph.degrees) - graph.adjacency
        payload["lambda2"] = _round6(linalg.symmetric_eigenvalues(laplacian)[1])
    if matches.has_explicit_days:
        payload["days_to_connected"] = competition.first_connected_day(matches)
        payload["days_to_nonbipartite"] = competition.first_odd_cycle_day(matches)
    return payload


def _simulate_payload(config: RunConfig) -> dict:
    n = config.teams
    schedule = competition.round_robin_schedule(n)
    if config.seed is not None:
        schedule = competition.shuffle_days(schedule, config.seed)
    connected_at = competition.days_to_connected(schedule)
    odd_cycle_at = competition.days_to_nonbipartite(schedule)
    trace = []
    for day_count in range(1, len(schedule.days) + 1):
        trace.append(
            {
                "day": day_count,
                "matches": [[i + 1, j + 1] for i, j in schedule.days[day_count - 1]],
                "connected": day_count >= connected_at,
                "odd_cycle": day_count >= odd_cycle_at,
            }
        )
    return {
        "teams": n,
        "seed": config.seed,
        "days": len(schedule.days),
        "schedule": trace,
        "days_to_connected": connected_at,
        "connected_bounds": [2, n // 2],
        "days_to_nonbipartite": odd_cycle_at,
        "nonbipartite_bounds": [3, n // 2 + 1],
        "within_bounds": bool(
            2 <= connected_at <= n // 2 and 3 <= odd_cycle_at <= n // 2 + 1
        ),
    }


def _network_payload(graph: WeightedDigraph, config: RunConfig) -> dict:
    matches = netflow.digraph_to_matches(graph)
    payload = _rate_payload(matches, config)
    payload["self_loops_dropped"] = graph.dropped_self_loops
    return payload


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def render_payload(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        return _render_csv(payload)
    return _render_table(payload)


def _render_csv(payload: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    ratings = payload.get("ratings")
    if ratings:
        keys = list(ratings[0])
        writer.writerow([_CSV_COLUMNS.get(key, key) for key in keys])
        for row in ratings:
            writer.writerow([row["team"]] + [f"{row[key]:.6f}" for key in keys[1:]])
    else:
        writer.writerow(["key", "value"])
        for key, value in payload.items():
            if isinstance(value, (str, int, float, bool)) or value is None:
                writer.writerow([key, "" if value is None else value])
    return buffer.getvalue()


def _render_table(payload: dict) -> str:
    lines = []
    ratings = payload.get("ratings")
    if ratings:
        keys = list(ratings[0])
        widths = {key: max(len(key), max(len(_cell(row[key])) for row in ratings)) for key in keys}
        lines.append("  ".join(key.ljust(widths[key]) for key in keys))
        for row in ratings:
            lines.append("  ".join(_cell(row[key]).ljust(widths[key]) for key in keys))
        lines.append("")
    for key, value in payload.items():
        if key in ("ratings", "schedule", "flows") or (key == "teams" and isinstance(value, list)):
            continue
        if isinstance(value, dict):
            inner = ", ".join(f"{k}={_cell(v)}" for k, v in value.items())
            lines.append(f"{key}: {inner}")
        elif isinstance(value, list):
            lines.append(f"{key}: {value}")
        else:
            lines.append(f"{key}: {_cell(value)}")
    flows = payload.get("flows")
    if flows:
        lines.append("flows:")
        for entry in flows:
            lines.append(f"  {entry['team_a']} -> {entry['team_b']}: {entry['flow']:.6f}")
    schedule = payload.get("schedule")
    if schedule:
        lines.append("schedule:")
        for day in schedule:
            pairs = ", ".join(f"{a}-{b}" for a, b in day["matches"])
            marks = []
            if day["connected"]:
                marks.append("connected")
            if day["odd_cycle"]:
                marks.append("odd cycle")
            suffix = f"  [{', '.join(marks)}]" if marks else ""
            lines.append(f"  day {day['day']}: {pairs}{suffix}")
    return "\n".join(lines) + "\n"


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    if value is None:
        return "-"
    return str(value)


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def run(config: RunConfig) -> int:
    """Execute one command; report to stdout, diagnostics to stderr."""
    try:
        if config.command == "rate":
            matches = parse_matches_csv(_read_input(config.input_path))
            payload = _rate_payload(matches, config)
        elif config.command == "graph-check":
            matches = parse_matches_csv(_read_input(config.input_path))
            payload = _graph_check_payload(matches)
        elif config.command == "network-rate":
            graph = parse_edges_csv(_read_input(config.input_path))
            payload = _network_payload(graph, config)
        else:
            payload = _simulate_payload(config)
    except ParseError as exc:
        print(f"rank-forge: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DisconnectedGraphError, NotIrreducibleError) as exc:
        print(f"rank-forge: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except ConvergenceError as exc:
        print(f"rank-forge: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (RankForgeError, ValueError, OSError) as exc:
        print(f"rank-forge: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(render_payload(payload, config.output_format))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit with the config code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser, *, rating: bool) -> None:
    parser.add_argument("--input", required=True, help="input CSV path, or - for stdin")
    parser.add_argument("--output", choices=("json", "csv", "table"), default="table", help="report format")
    if rating:
        parser.add_argument("--method", choices=netflow.RATING_METHODS, default="massey")
        parser.add_argument("--smoothing", choices=("raw", "laplace"), default="laplace")
        parser.add_argument("--tol", type=float, default=alt_ratings.DEFAULT_TOL)
        parser.add_argument("--max-iter", type=int, default=alt_ratings.DEFAULT_MAX_ITER)
        parser.add_argument("--kappa", type=float, default=25.0)
        parser.add_argument("--zeta", type=float, default=400.0)
        parser.add_argument("--init-rating", type=float, default=1500.0)
        parser.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rank-forge", description="Least-squares sport ratings and graph diagnostics")
    commands = parser.add_subparsers(dest="command", required=True)

    rate = commands.add_parser("rate", parents=[], help="rate teams from a match CSV")
    _add_common(rate, rating=True)

    check = commands.add_parser("graph-check", help="connectivity and bipartiteness diagnostics")
    _add_common(check, rating=False)

    network = commands.add_parser("network", help="weighted-digraph commands")
    network_sub = network.add_subparsers(dest="network_command", required=True)
    network_rate = network_sub.add_parser("rate", help="rate nodes of an edge-list CSV")
    _add_common(network_rate, rating=True)

    simulate = commands.add_parser("simulate", help="round-robin schedule diagnostics")
    simulate.add_argument("--teams", type=int, required=True, help="even team count, at least 4")
    simulate.add_argument("--seed", type=int, default=None, help="shuffle day order with this seed")
    simulate.add_argument("--output", choices=("json", "csv", "table"), default="table")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    command = args.command
    if command == "network":
        command = "network-rate"
    if command == "simulate":
        return RunConfig(
            command=command,
            output_format=args.output,
            seed=args.seed,
            teams=args.teams,
        )
    common = {
        "command": command,
        "input_path": args.input,
        "output_format": args.output,
    }
    if command == "graph-check":
        return RunConfig(**common)
    return RunConfig(
        **common,
        method=args.method,
        smoothing=args.smoothing,
        tol=args.tol,
        max_iter=args.max_iter,
        elo=EloParams(kappa=args.kappa, zeta=args.zeta, initial_rating=args.init_rating),
        seed=args.seed,
    )


def _configure_logging() -> None:
    level_name = os.environ.get("RANK_FORGE_LOG", "error").strip().lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    level = levels.get(level_name)
    if level is None:
        level = logging.ERROR
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("rank-forge %(levelname)s %(name)s: %(message)s"))
    package_logger = logging.getLogger("rank_forge")
    package_logger.handlers[:] = [handler]
    package_logger.setLevel(level)
    if level_name not in levels:
        package_logger.error("RANK_FORGE_LOG=%r not recognized; using 'error'", level_name)


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
    except ValueError as exc:
        print(f"rank-forge: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logger.debug("running %s", config)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
