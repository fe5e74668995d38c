"""Competition metrics: NRA, Elo, regret, Pareto points, completion rate.

Everything here is a pure function of match records, so reports rebuilt from
JSONL logs are identical to the ones computed during a run.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from statistics import fmean
from typing import Iterable, Sequence

from gamearena.core import GameError, GameId, Outcome
from gamearena.games import get_game
from gamearena.games.prisoners_dilemma import SILENT, TESTIFY, round_payoffs
from gamearena.match import MatchRecord, read_jsonl, replay

INITIAL_RATING = 1500.0
ELO_K = 20.0


# --- NRA ---------------------------------------------------------------------

def nra(scores_i: Sequence[float], scores_o: Sequence[float]) -> float:
    """(sum_i - sum_o) / (sum_i + sum_o); 0 when both sums are 0."""
    if len(scores_i) != len(scores_o):
        raise ValueError(f"score vectors differ in length: {len(scores_i)} vs {len(scores_o)}")
    si = sum(Fraction(s) for s in scores_i)
    so = sum(Fraction(s) for s in scores_o)
    if si + so == 0:
        return 0.0
    return float((si - so) / (si + so))


def is_zero_sum(game_id) -> bool:
    return get_game(game_id).spec.zero_sum


def zero_sum_score(outcome: Outcome, player: int, game_id=None) -> float:
    """1 for a win, 0.5 for a draw, 0 for a loss."""
    if game_id is not None and not is_zero_sum(game_id):
        raise GameError(f"{GameId.parse(game_id)} is not zero-sum")
    if outcome.winner is None:
        return 0.5
    return 1.0 if outcome.winner == player else 0.0


def match_score(record: MatchRecord, agent_id: str) -> float:
    """f_s for one valid match: win/draw/loss score or the raw reward."""
    seat = record.seat_of(agent_id)
    if is_zero_sum(record.game):
        return zero_sum_score(record.outcome, seat)
    return float(record.outcome.returns[seat])


# --- Elo ---------------------------------------------------------------------

def elo_expected(r_a: float, r_b: float) -> tuple[float, float]:
    e_a = 1.0 / (1.0 + 10.0 ** ((r_b - r_a) / 400.0))
    return e_a, 1.0 - e_a


def elo_update(r_a: float, r_b: float, s_a: float, k: float = ELO_K) -> tuple[float, float]:
    if s_a not in (0, 0.5, 1):
        raise ValueError(f"result must be 0, 0.5 or 1, got {s_a!r}")
    e_a, _ = elo_expected(r_a, r_b)
    delta = k * (s_a - e_a)
    return r_a + delta, r_b - delta


def pairwise_result(outcome: Outcome, seat: int) -> float:
    """Win/draw/loss from the returns; used for Elo on every game."""
    mine, theirs = outcome.returns[seat], outcome.returns[1 - seat]
    return 1.0 if mine > theirs else 0.5 if mine == theirs else 0.0


@dataclass
class EloTable:
    k: float = ELO_K
    ratings: dict[str, float] = field(default_factory=dict)

    def rating(self, agent: str) -> float:
        return self.ratings.setdefault(agent, INITIAL_RATING)

    def update(self, a: str, b: str, s_a: float) -> None:
        self.ratings[a], self.ratings[b] = elo_update(self.rating(a), self.rating(b), s_a, self.k)


# --- regret and system reward -------------------------------------------------

def auction_regret(b1: int, b2: int, v: int) -> int:
    if b1 > b2 + 1:
        return b1 - (b2 + 1)
    if b2 + 1 < v:
        return v - (b2 + 1)
    return 0


_IPD_REGRET = {(TESTIFY, SILENT): 0, (TESTIFY, TESTIFY): 0, (SILENT, TESTIFY): 1, (SILENT, SILENT): 2}


def _ipd_move(move: str) -> str:
    word = move.strip().strip("<>").strip().capitalize()
    if word not in (SILENT, TESTIFY):
        raise ValueError(f"not a prisoner's dilemma move: {move!r}")
    return word


def ipd_regret(move: str, opp_move: str) -> int:
    return _IPD_REGRET[(_ipd_move(move), _ipd_move(opp_move))]


def system_reward(payoffs: Iterable[float]) -> float:
    return sum(payoffs)


def ipd_rounds(record: MatchRecord) -> list[tuple[str, str]]:
    """Joint moves per round, seat 0 first."""
    if GameId.parse(record.game) is not GameId.PRISONERS_DILEMMA:
        raise GameError("not a prisoner's dilemma record")
    out, pending = [], {}
    for turn in record.turns:
        pending[turn.player] = _ipd_move(turn.action)
        if len(pending) == 2:
            out.append((pending[0], pending[1]))
            pending = {}
    return out


def ipd_round_payoffs(record: MatchRecord) -> list[tuple[int, int]]:
    return [round_payoffs(a, b) for a, b in ipd_rounds(record)]


def ipd_system_rewards(record: MatchRecord) -> list[int]:
    return [system_reward(p) for p in ipd_round_payoffs(record)]


def ipd_match_regret(record: MatchRecord, seat: int) -> int:
    return sum(ipd_regret(r[seat], r[1 - seat]) for r in ipd_rounds(record))


def auction_match_regret(record: MatchRecord, seat: int) -> int:
    state = replay(record)
    bids = {t.player: int(t.action.strip("<>")) for t in record.turns}
    return auction_regret(bids[seat], bids[1 - seat], state.position.valuations[seat])


# --- Pareto --------------------------------------------------------------------

@dataclass(frozen=True)
class ParetoPoint:
    reward_player1: float
    reward_player2: float

    @property
    def system_reward(self) -> float:
        return self.reward_player1 + self.reward_player2


def negotiation_split(record: MatchRecord):
    """Replay a negotiation: (pool, value vectors, allocations or None)."""
    if GameId.parse(record.game) is not GameId.NEGOTIATION:
        raise GameError("not a negotiation record")
    state = replay(record)
    pos = state.position
    allocs = state.game.allocations(pos)
    return pos.pool, pos.values, allocs


def pareto_points(records: Iterable[MatchRecord]) -> tuple[list[ParetoPoint], int]:
    """One point per agreement, valued from the replayed split; plus the no-deal count."""
    points, no_deal = [], 0
    for rec in records:
        if not rec.valid:
            continue
        _, values, allocs = negotiation_split(rec)
        if allocs is None:
            no_deal += 1
            continue
        x, y = (sum(v * a for v, a in zip(values[p], allocs[p])) for p in (0, 1))
        points.append(ParetoPoint(x, y))
    return points, no_deal


# --- competitions ----------------------------------------------------------------

@dataclass
class CompetitionLog:
    """All attempted matches of one competition, in slot then attempt order."""

    competition_id: str
    game: str
    agent_a: str
    agent_b: str
    target: int
    records: list[MatchRecord] = field(default_factory=list)

    @property
    def valid_records(self) -> list[MatchRecord]:
        return [r for r in self.records if r.valid]

    @property
    def attempts(self) -> int:
        return len(self.records)

    @property
    def complete(self) -> bool:
        return len(self.valid_records) >= self.target

    @property
    def completion_rate(self) -> float:
        """target / attempts; for a capped competition this is only the cap's bound."""
        return self.target / self.attempts if self.attempts else 0.0

    def score_vectors(self) -> tuple[list[float], list[float]]:
        valid = self.valid_records
        return [match_score(r, self.agent_a) for r in valid], [match_score(r, self.agent_b) for r in valid]

    def nra(self) -> float:
        return nra(*self.score_vectors())

    def meta(self) -> dict:
        return {"competition_id": self.competition_id, "game": self.game, "agent_a": self.agent_a,
                "agent_b": self.agent_b, "target": self.target}


def load_logs(log_dir: str | Path) -> list[CompetitionLog]:
    """Read ``<competition>/<seed>.jsonl`` files with their ``.meta.json`` sidecars."""
    out = []
    for meta_path in sorted(Path(log_dir).glob("*/*.meta.json")):
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        records = list(read_jsonl(meta_path.with_name(meta_path.name.replace(".meta.json", ".jsonl"))))
        out.append(CompetitionLog(meta["competition_id"], meta["game"], meta["agent_a"], meta["agent_b"],
                                  meta["target"], records))
    return sorted(out, key=lambda c: c.competition_id)


def nra_table(logs: Sequence[CompetitionLog]) -> tuple[list[str], dict[tuple[str, str], dict[str, float]]]:
    """Rows keyed by (agent, opponent); a cell is present only for completed competitions."""
    games = sorted({log.game for log in logs}, key=lambda g: [str(x) for x in GameId].index(g))
    rows: dict[tuple[str, str], dict[str, float]] = {}
    for log in logs:
        row = rows.setdefault((log.agent_a, log.agent_b), {})
        if log.complete:
            row[log.game] = log.nra()
    return games, rows


def average(values: Iterable[float]) -> float | None:
    vals = list(values)
    return fmean(vals) if vals else None


def elo_tables(logs: Sequence[CompetitionLog]) -> dict[str, EloTable]:
    """Per-game ratings, folding valid matches by competition id then record order."""
    tables: dict[str, EloTable] = {}
    for log in sorted(logs, key=lambda c: c.competition_id):
        table = tables.setdefault(log.game, EloTable())
        table.rating(log.agent_a)
        table.rating(log.agent_b)
        for rec in log.valid_records:
            a, b = rec.agents
            table.update(a, b, pairwise_result(rec.outcome, 0))
    return tables


# --- emitters ---------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.6f}"
    return str(x)


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def nra_matrix_csv(logs) -> str:
    games, rows = nra_table(logs)
    out = []
    for (agent, opp), cells in sorted(rows.items()):
        out.append([agent, opp, *[cells.get(g) for g in games], average(cells.values())])
    return _csv(["agent", "opponent", *games, "avg"], out)


def elo_csv(logs) -> str:
    tables = elo_tables(logs)
    out = []
    for game in sorted(tables):
        for agent, r in sorted(tables[game].ratings.items()):
            out.append([game, agent, r])
    agents = sorted({a for t in tables.values() for a in t.ratings})
    for agent in agents:
        out.append(["avg", agent, average(t.ratings[agent] for t in tables.values() if agent in t.ratings)])
    return _csv(["game", "agent", "rating"], out)


def regret_csv(logs) -> str:
    out = []
    for log in logs:
        gid = GameId.parse(log.game)
        if gid not in (GameId.BLIND_AUCTION, GameId.PRISONERS_DILEMMA):
            continue
        for i, rec in enumerate(log.valid_records):
            for seat, agent in enumerate(rec.agents):
                if gid is GameId.BLIND_AUCTION:
                    out.append([log.competition_id, log.game, i, rec.seed, agent, 1,
                                auction_match_regret(rec, seat)])
                else:
                    for rnd, moves in enumerate(ipd_rounds(rec), start=1):
                        out.append([log.competition_id, log.game, i, rec.seed, agent, rnd,
                                    ipd_regret(moves[seat], moves[1 - seat])])
    return _csv(["competition", "game", "match", "seed", "agent", "round", "regret"], out)


def pareto_csv(logs) -> str:
    out = []
    for log in logs:
        gid = GameId.parse(log.game)
        for i, rec in enumerate(log.valid_records):
            if gid is GameId.NEGOTIATION:
                pts, _ = pareto_points([rec])
                for p in pts:
                    out.append([log.competition_id, log.game, i, rec.seed, "", rec.agents[0], rec.agents[1],
                                float(p.reward_player1), float(p.reward_player2), float(p.system_reward)])
            elif gid is GameId.PRISONERS_DILEMMA:
                for rnd, (x, y) in enumerate(ipd_round_payoffs(rec), start=1):
                    out.append([log.competition_id, log.game, i, rec.seed, rnd, rec.agents[0], rec.agents[1],
                                float(x), float(y), float(x + y)])
    return _csv(["competition", "game", "match", "seed", "round", "player1", "player2",
                 "reward_player1", "reward_player2", "system_reward"], out)


def completion_csv(logs) -> str:
    out = [[log.competition_id, log.game, log.agent_a, log.agent_b, len(log.valid_records), log.attempts,
            log.completion_rate, "yes" if log.complete else "no"] for log in logs]
    return _csv(["competition", "game", "agent_a", "agent_b", "valid", "attempts", "completion_rate",
                 "complete"], out)


def leaderboard_md(logs) -> str:
    games, rows = nra_table(logs)
    ranked = sorted(rows.items(), key=lambda kv: (-(average(kv[1].values()) if kv[1] else -math.inf), kv[0]))
    lines = ["# Leaderboard", "", "Ranked by average NRA over the games each pairing completed.", "",
             "| rank | agent | opponent | " + " | ".join(games) + " | avg |",
             "|" + "---|" * (len(games) + 4)]
    for rank, ((agent, opp), cells) in enumerate(ranked, start=1):
        vals = [_fmt(cells.get(g)) or "-" for g in games]
        avg = average(cells.values())
        lines.append(f"| {rank} | {agent} | {opp} | " + " | ".join(vals) + f" | {_fmt(avg) or '-'} |")
    gaps = [log.competition_id for log in logs if not log.complete]
    if gaps:
        lines += ["", "Incomplete competitions (attempt cap reached): " + ", ".join(gaps)]
    deals = []
    for log in logs:
        if GameId.parse(log.game) is GameId.NEGOTIATION and log.valid_records:
            pts, no_deal = pareto_points(log.valid_records)
            deals.append(f"{log.competition_id}: {len(pts)} agreements, {no_deal} no-deal")
    if deals:
        lines += ["", "Negotiation outcomes: " + "; ".join(deals)]
    return "\n".join(lines) + "\n"


REPORTS = {
    "nra_matrix.csv": nra_matrix_csv,
    "elo.csv": elo_csv,
    "regret.csv": regret_csv,
    "pareto_points.csv": pareto_csv,
    "completion.csv": completion_csv,
    "leaderboard.md": leaderboard_md,
}


def render_reports(logs: Sequence[CompetitionLog]) -> dict[str, str]:
    logs = sorted(logs, key=lambda c: c.competition_id)
    return {name: fn(logs) for name, fn in REPORTS.items()}


def write_reports(logs: Sequence[CompetitionLog], out_dir: str | Path) -> dict[str, str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports = render_reports(logs)
    for name, text in reports.items():
        (out / name).write_text(text, encoding="utf-8")
    return reports
