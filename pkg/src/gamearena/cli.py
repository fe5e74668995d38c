"""Command-line entry point: play, compete, tournament, report, validate-prompts."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from gamearena.config import (
    BUILTIN_AGENTS,
    ConfigError,
    TournamentConfig,
    apply_overrides,
    build_agent,
    load_tournament,
    read_config,
    tournament_from_dict,
)
from gamearena.core import GameError
from gamearena.match import run_match
from gamearena.metrics import load_logs, write_reports
from gamearena.orchestrator import run_tournament


def _agents(args) -> dict:
    data = read_config(args.config, args.set) if args.config else apply_overrides({}, args.set)
    return {**BUILTIN_AGENTS, **data.get("agents", {})}


def cmd_play(args) -> int:
    agents = _agents(args)
    for a in (args.a, args.b):
        if a not in agents:
            raise ConfigError(f"unknown agent {a!r}; known: {', '.join(sorted(agents))}")
    seats = [build_agent(a, agents[a], args.seed) for a in (args.a, args.b)]
    if args.a == args.b:
        seats[1].agent_id = f"{args.b}#2"
    rec = run_match(args.game, seats, args.seed)
    print(f"{rec.game} seed={rec.seed} seats={rec.agents}")
    for i, t in enumerate(rec.turns, start=1):
        mark = "" if t.legal else "  [illegal]"
        print(f"{i:3d}. player {t.player} ({rec.agents[t.player]}): {t.action}{mark}")
        if args.verbose and t.generation is not None:
            print(f"     generation: {t.generation!r}")
    if rec.valid:
        oc = rec.outcome
        print(f"returns={list(oc.returns)} winner={oc.winner} draw={oc.draw}")
    else:
        print(f"invalid match: {rec.invalid_cause}")
    return 0


def cmd_compete(args) -> int:
    data = read_config(args.config, args.set) if args.config else apply_overrides({}, args.set)
    data = dict(data)
    data["competitions"] = [{"game": args.game, "agent_a": args.a, "agent_b": args.b}]
    for key in ("valid_matches_target", "base_seed", "parallelism"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    if args.out:
        data["output_dir"] = args.out
    return _run(tournament_from_dict(data))


def cmd_tournament(args) -> int:
    cfg = load_tournament(args.config, args.set)
    if args.out:
        cfg = TournamentConfig(cfg.agents, cfg.competitions, args.out, cfg.common_opponent,
                               cfg.parallelism, cfg.base_seed)
    return _run(cfg)


def _run(cfg: TournamentConfig) -> int:
    result = run_tournament(cfg)
    print(result.reports["leaderboard.md"], end="")
    print(f"logs: {result.output_dir / 'logs'}\nreports: {result.output_dir / 'reports'}")
    for cid, msg in result.failures.items():
        print(f"warning: {msg}", file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    log_dir = Path(args.logs)
    if not log_dir.is_dir():
        raise ConfigError(f"log directory not found: {log_dir}")
    logs = load_logs(log_dir)
    if not logs:
        raise ConfigError(f"no competition logs under {log_dir}")
    out = Path(args.out) if args.out else log_dir.parent / "reports"
    reports = write_reports(logs, out)
    print(reports["leaderboard.md"], end="")
    print(f"reports: {out}")
    return 0


def cmd_validate_prompts(args) -> int:
    from gamearena.prompts.golden import check_goldens, fixtures
    from gamearena.prompts.adapter import STYLES

    bad = check_goldens()
    total = len(fixtures()) * len(STYLES)
    for name, style in bad:
        print(f"MISMATCH {name} / {style}")
    print(f"{total - len(bad)}/{total} prompts match their goldens")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gamearena", description="Game-theoretic agent tournaments.")
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=False):
        if config_required:
            sp.add_argument("config", help="tournament TOML file")
        else:
            sp.add_argument("--config", help="TOML file with agent definitions")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (dotted path), repeatable")

    sp = sub.add_parser("play", help="play one match and print every turn")
    sp.add_argument("--game", required=True)
    sp.add_argument("--a", required=True, help="agent in seat 0")
    sp.add_argument("--b", required=True, help="agent in seat 1")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-v", "--verbose", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("compete", help="run one competition")
    sp.add_argument("--game", required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--target", dest="valid_matches_target", type=int)
    sp.add_argument("--seed", dest="base_seed", type=int)
    sp.add_argument("--parallelism", type=int)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_compete)

    sp = sub.add_parser("tournament", help="run every competition in a config file")
    sp.add_argument("--out")
    common(sp, config_required=True)
    sp.set_defaults(func=cmd_tournament)

    sp = sub.add_parser("report", help="recompute reports from JSONL logs")
    sp.add_argument("--logs", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("validate-prompts", help="compare composed prompts with the goldens")
    sp.set_defaults(func=cmd_validate_prompts)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, GameError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
