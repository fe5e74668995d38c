"""Competition protocol: seeded slots, opener alternation, re-attempts, logs, reports."""

from __future__ import annotations

import json
import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from gamearena.config import CompetitionConfig, TournamentConfig, build_agent, check_credentials
from gamearena.core import derive_seed
from gamearena.match import MatchRecord, run_match, write_jsonl
from gamearena.metrics import CompetitionLog, write_reports

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchTask:
    game_id: str
    seats: tuple[str, str]
    specs: tuple[Mapping, Mapping]
    seed: int
    game_params: Mapping

    def run(self) -> MatchRecord:
        agents = [build_agent(aid, spec, self.seed) for aid, spec in zip(self.seats, self.specs)]
        return run_match(self.game_id, agents, self.seed, dict(self.game_params))


def _run_task(task: MatchTask) -> MatchRecord:
    return task.run()


def seat_order(cfg: CompetitionConfig, slot: int) -> tuple[str, str]:
    """agent_a opens even slots; simultaneous games keep one seating throughout."""
    if cfg.alternate_first_player and cfg.sequential and slot % 2:
        return cfg.agent_b, cfg.agent_a
    return cfg.agent_a, cfg.agent_b


def match_seed(cfg: CompetitionConfig, seats: tuple[str, str], slot: int, attempt: int) -> int:
    return derive_seed(cfg.base_seed, cfg.competition_id, "/".join(seats), slot, attempt)


@dataclass
class CompetitionResult:
    config: CompetitionConfig
    log: CompetitionLog
    error: str | None = None

    @property
    def records(self) -> list[MatchRecord]:
        return self.log.records

    def score_vectors(self):
        return self.log.score_vectors()


def run_competition(cfg: CompetitionConfig, agents: Mapping[str, Mapping],
                    executor: Executor | None = None) -> CompetitionResult:
    """Play until every slot holds a valid match or the attempt cap is spent.

    Matches run in waves: each wave holds the pending slots, so the set of
    records depends only on seeds, never on scheduling. When the remaining
    budget cannot cover a full wave, the lowest slots go first.
    """
    specs = {a: dict(agents[a]) for a in (cfg.agent_a, cfg.agent_b)}
    attempts = {slot: 0 for slot in range(cfg.valid_matches_target)}
    pending = sorted(attempts)
    done: list[tuple[int, int, MatchRecord]] = []
    spent = 0
    own_pool = None
    if executor is None and cfg.parallelism > 1:
        executor = own_pool = ProcessPoolExecutor(max_workers=cfg.parallelism)
    try:
        while pending and spent < cfg.attempt_cap:
            wave = pending[: cfg.attempt_cap - spent]
            tasks = []
            for slot in wave:
                seats = seat_order(cfg, slot)
                seed = match_seed(cfg, seats, slot, attempts[slot])
                tasks.append(MatchTask(cfg.game_id, seats, (specs[seats[0]], specs[seats[1]]), seed,
                                       dict(cfg.game_params)))
            results = list(executor.map(_run_task, tasks)) if executor else [t.run() for t in tasks]
            spent += len(wave)
            still = []
            for slot, rec in zip(wave, results):
                done.append((slot, attempts[slot], rec))
                if not rec.valid:
                    attempts[slot] += 1
                    still.append(slot)
            pending = sorted(still + pending[len(wave):])
    finally:
        if own_pool is not None:
            own_pool.shutdown()
    done.sort(key=lambda t: (t[0], t[1]))
    comp_log = CompetitionLog(cfg.competition_id, cfg.game_id, cfg.agent_a, cfg.agent_b,
                              cfg.valid_matches_target, [r for _, _, r in done])
    error = None
    if not comp_log.complete:
        error = (f"{cfg.competition_id}: attempt cap {cfg.attempt_cap} reached with "
                 f"{len(comp_log.valid_records)}/{cfg.valid_matches_target} valid matches")
        log.warning(error)
    return CompetitionResult(cfg, comp_log, error)


def write_competition_log(comp: CompetitionLog, base_seed: int, log_dir: str | Path) -> Path:
    d = Path(log_dir) / comp.competition_id
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{base_seed}.jsonl"
    write_jsonl(comp.records, path)
    (d / f"{base_seed}.meta.json").write_text(json.dumps(comp.meta(), indent=2) + "\n", encoding="utf-8")
    return path


@dataclass
class TournamentResult:
    competitions: list[CompetitionResult]
    reports: dict[str, str]
    output_dir: Path
    failures: dict[str, str] = field(default_factory=dict)

    @property
    def logs(self) -> list[CompetitionLog]:
        return [c.log for c in self.competitions]


def run_tournament(cfg: TournamentConfig) -> TournamentResult:
    """Run every competition, persist logs, and emit all reports."""
    check_credentials({a: cfg.agents[a] for c in cfg.competitions for a in (c.agent_a, c.agent_b)})
    out = Path(cfg.output_dir)
    results, failures = [], {}
    pool = ProcessPoolExecutor(max_workers=cfg.parallelism) if cfg.parallelism > 1 else None
    try:
        for comp in sorted(cfg.competitions, key=lambda c: c.competition_id):
            try:
                res = run_competition(comp, cfg.agents, pool)
            except Exception as exc:  # isolate a broken competition; its cells stay empty
                log.exception("competition %s failed", comp.competition_id)
                res = CompetitionResult(comp, CompetitionLog(comp.competition_id, comp.game_id, comp.agent_a,
                                                             comp.agent_b, comp.valid_matches_target),
                                        f"{type(exc).__name__}: {exc}")
            if res.error:
                failures[comp.competition_id] = res.error
            write_competition_log(res.log, comp.base_seed, out / "logs")
            results.append(res)
    finally:
        if pool is not None:
            pool.shutdown()
    reports = write_reports([r.log for r in results], out / "reports")
    return TournamentResult(results, reports, out, failures)
