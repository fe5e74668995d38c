import json
from collections import Counter
from pathlib import Path

import pytest

from gamearena.cli import main
from gamearena.config import (
    BUILTIN_AGENTS, CompetitionConfig, ConfigError, apply_overrides, build_agent, load_tournament,
    tournament_from_dict,
)
from gamearena.match import read_jsonl
from gamearena.metrics import load_logs, render_reports
from gamearena.orchestrator import match_seed, run_competition, run_tournament, seat_order

ROOT = Path(__file__).resolve().parents[1]
AGENTS = {**BUILTIN_AGENTS, "never": {"kind": "scripted", "actions": ["<nothing>"]}}


def openers(records, agent):
    return sum(r.agents[0] == agent for r in records if r.valid)


# --- config ------------------------------------------------------------------------

def test_competition_config_rules():
    cfg = CompetitionConfig("ttt", "random", "mcts")
    assert cfg.competition_id == "tictactoe__random__vs__mcts"
    assert cfg.attempt_cap == 200 and cfg.sequential
    with pytest.raises(ConfigError):
        CompetitionConfig("ttt", "random", "mcts", valid_matches_target=49)
    with pytest.raises(ConfigError):
        CompetitionConfig("ttt", "random", "random")
    CompetitionConfig("ipd", "tft", "random", valid_matches_target=49)


def test_overrides():
    data = apply_overrides({"agents": {"m": {"kind": "mcts"}}}, ["agents.m.mcts.simulations=50", "base_seed=3"])
    assert data["agents"]["m"]["mcts"]["simulations"] == 50 and data["base_seed"] == 3
    with pytest.raises(ConfigError):
        apply_overrides({}, ["no_equals"])


def test_tournament_pairs_from_games():
    cfg = tournament_from_dict({"games": ["nim", "pig"], "agents": {"x": {"kind": "random"},
                                                                  "y": {"kind": "random"},
                                                                  "z": {"kind": "random"}},
                                "common_opponent": "z"})
    assert sorted(c.competition_id for c in cfg.competitions) == [
        "nim__x__vs__z", "nim__y__vs__z", "pig__x__vs__z", "pig__y__vs__z"]


def test_bad_configs():
    with pytest.raises(ConfigError):
        tournament_from_dict({"schema_version": 2, "games": ["nim"]})
    with pytest.raises(ConfigError):
        tournament_from_dict({"competitions": [{"game": "nim", "agent_a": "random", "agent_b": "ghost"}]})
    with pytest.raises(ConfigError):
        tournament_from_dict({"agents": {"bad": {"kind": "oracle"}}, "games": ["nim"]})
    with pytest.raises(ConfigError):
        tournament_from_dict({"agents": {"m": {"kind": "llm", "client": "http"}}, "games": ["nim"]})


def test_build_agent_applies_mcts_keys():
    agent = build_agent("m", {"kind": "mcts", "mcts": {"simulations": 12, "c": 0.5, "determinizations": 3}}, 0)
    assert (agent.config.num_simulations, agent.config.exploration_constant, agent.config.determinizations) == \
        (12, 0.5, 3)


def test_load_mock_config():
    cfg = load_tournament(ROOT / "configs" / "mock_tournament.toml")
    assert len(cfg.competitions) == 10 and cfg.common_opponent == "mock_prompt"


# --- competitions ----------------------------------------------------------------------

def test_seat_schedule():
    cfg = CompetitionConfig("ttt", "a", "b", valid_matches_target=4)
    assert [seat_order(cfg, s) for s in range(4)] == [("a", "b"), ("b", "a")] * 2
    sim = CompetitionConfig("ipd", "a", "b", valid_matches_target=4)
    assert {seat_order(sim, s) for s in range(4)} == {("a", "b")}
    assert match_seed(cfg, ("a", "b"), 0, 0) != match_seed(cfg, ("a", "b"), 0, 1)


def test_random_vs_random_fifty_valid():
    res = run_competition(CompetitionConfig("ttt", "random", "mock"), AGENTS)
    valid = res.log.valid_records
    assert len(valid) == 50 and res.error is None
    assert openers(valid, "random") == openers(valid, "mock") == 25


def test_reattempts_keep_the_seat():
    agents = {**AGENTS, "sloppy": {"kind": "llm", "client": "random_legal", "illegal_rate": 0.3}}
    res = run_competition(CompetitionConfig("nim", "sloppy", "random", valid_matches_target=20), agents)
    assert len(res.log.valid_records) == 20
    assert res.log.attempts > 20
    assert openers(res.records, "sloppy") == 10
    assert res.log.completion_rate == pytest.approx(20 / res.log.attempts)


def test_attempt_cap():
    res = run_competition(CompetitionConfig("ttt", "never", "random", valid_matches_target=10), AGENTS)
    assert res.log.attempts == 40 and not res.log.valid_records
    assert res.log.completion_rate == 0.25
    assert "attempt cap" in res.error


def test_rerun_is_identical():
    cfg = CompetitionConfig("kuhn", "random", "mock", valid_matches_target=10, base_seed=5)
    first = [r.to_line() for r in run_competition(cfg, AGENTS).records]
    assert first == [r.to_line() for r in run_competition(cfg, AGENTS).records]
    other = CompetitionConfig("kuhn", "random", "mock", valid_matches_target=10, base_seed=6)
    assert first != [r.to_line() for r in run_competition(other, AGENTS).records]


def tiny_tournament(tmp_path, **extra):
    data = {"output_dir": str(tmp_path / "run"), "valid_matches_target": 6, "base_seed": 9,
            "agents": {"p": {"kind": "llm", "client": "random_legal"},
                       "q": {"kind": "llm", "client": "random_legal", "reasoning": {"style": "cot"}},
                       "opp": {"kind": "random"}},
            "common_opponent": "opp", "games": ["tictactoe", "blind_auction"]}
    data.update(extra)
    return tournament_from_dict(data)


def test_tournament_bundle(tmp_path):
    result = run_tournament(tiny_tournament(tmp_path))
    assert len(result.competitions) == 4 and not result.failures
    logs = sorted(p.relative_to(result.output_dir).as_posix()
                  for p in (result.output_dir / "logs").rglob("*.jsonl"))
    assert logs == [f"logs/{c}/9.jsonl" for c in sorted(x.config.competition_id for x in result.competitions)]
    for name, text in result.reports.items():
        assert (result.output_dir / "reports" / name).read_text() == text


def test_tournament_isolates_failures(tmp_path):
    cfg = tiny_tournament(tmp_path, agents={"p": {"kind": "random"}, "q": {"kind": "scripted", "actions": ["x"]},
                                            "opp": {"kind": "random"}})
    result = run_tournament(cfg)
    assert set(result.failures) == {"blind_auction__q__vs__opp", "tictactoe__q__vs__opp"}
    rows = render_reports(result.logs)["nra_matrix.csv"].splitlines()
    assert rows[0] == "agent,opponent,tictactoe,blind_auction,avg"
    assert "q,opp,,," in rows


def test_leaderboard_ranks_by_average_nra(tmp_path):
    result = run_tournament(tiny_tournament(tmp_path))
    lines = [l for l in result.reports["leaderboard.md"].splitlines() if l.startswith("| ") and "rank" not in l]
    avgs = [float(l.split("|")[-2]) for l in lines]
    assert avgs == sorted(avgs, reverse=True)


def test_parallel_matches_serial(tmp_path):
    serial = run_tournament(tiny_tournament(tmp_path / "a"))
    parallel = run_tournament(tiny_tournament(tmp_path / "b", parallelism=2))
    assert [r.to_line() for c in serial.competitions for r in c.records] == \
        [r.to_line() for c in parallel.competitions for r in c.records]


def test_report_recomputed_from_logs(tmp_path):
    result = run_tournament(tiny_tournament(tmp_path))
    assert render_reports(load_logs(result.output_dir / "logs")) == result.reports
    meta = json.loads(next((result.output_dir / "logs").rglob("*.meta.json")).read_text())
    assert set(meta) == {"competition_id", "game", "agent_a", "agent_b", "target"}


def test_missing_credentials(tmp_path, monkeypatch):
    monkeypatch.delenv("ARENA_NO_KEY", raising=False)
    cfg = tiny_tournament(tmp_path, agents={
        "p": {"kind": "llm", "endpoint": "http://x", "model": "m", "api_key_env": "ARENA_NO_KEY"},
        "opp": {"kind": "random"}})
    with pytest.raises(ConfigError, match="ARENA_NO_KEY"):
        run_tournament(cfg)


# --- CLI ---------------------------------------------------------------------------

def test_cli_play(capsys):
    assert main(["play", "--game", "nim", "--a", "random", "--b", "mcts", "--seed", "1",
                 "--set", "agents.mcts.kind=mcts", "--set", "agents.mcts.mcts.simulations=50"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("nim seed=1") and "returns=" in out


def test_cli_missing_config(capsys):
    assert main(["tournament", "missing.toml"]) != 0
    assert "config not found" in capsys.readouterr().err


def test_cli_unknown_agent(capsys):
    assert main(["play", "--game", "nim", "--a", "ghost", "--b", "random"]) == 2
    assert "unknown agent" in capsys.readouterr().err


def test_cli_compete_and_report(tmp_path, capsys):
    out = tmp_path / "c"
    assert main(["compete", "--game", "pig", "--a", "random", "--b", "mock", "--target", "4",
                 "--seed", "3", "--out", str(out)]) == 0
    first = {p.name: p.read_text() for p in (out / "reports").iterdir()}
    records = list(read_jsonl(out / "logs" / "pig__random__vs__mock" / "3.jsonl"))
    assert len(records) == 4 and Counter(r.agents[0] for r in records) == {"random": 2, "mock": 2}
    assert main(["report", "--logs", str(out / "logs"), "--out", str(tmp_path / "again")]) == 0
    again = {p.name: p.read_text() for p in (tmp_path / "again").iterdir()}
    assert again == first


def test_cli_tournament_with_overrides(tmp_path, capsys):
    code = main(["tournament", str(ROOT / "configs" / "mock_tournament.toml"), "--out", str(tmp_path / "t"),
                 "--set", "valid_matches_target=2", "--set", 'games=["nim"]'])
    assert code == 0
    assert "# Leaderboard" in capsys.readouterr().out
    assert len(list((tmp_path / "t" / "logs").iterdir())) == 2


def test_cli_validate_prompts(capsys):
    assert main(["validate-prompts"]) == 0
    assert "55/55" in capsys.readouterr().out
