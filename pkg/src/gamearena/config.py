"""Tournament configuration (TOML) and the agent factory."""

from __future__ import annotations

import copy
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from gamearena.core import GameId, derive_seed
from gamearena.games import get_game

SCHEMA_VERSION = 1
AGENT_KINDS = ("random", "mcts", "tft", "scripted", "llm")

# Agents usable by name without a config file.
BUILTIN_AGENTS: dict[str, dict] = {
    "random": {"kind": "random"},
    "mcts": {"kind": "mcts"},
    "tft": {"kind": "tft"},
    "mock": {"kind": "llm", "client": "random_legal"},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CompetitionConfig:
    game_id: str
    agent_a: str
    agent_b: str
    valid_matches_target: int = 50
    alternate_first_player: bool = True
    base_seed: int = 0
    parallelism: int = 1
    attempt_cap_factor: int = 4
    game_params: Mapping[str, Any] = field(default_factory=dict)
    competition_id: str = ""

    def __post_init__(self):
        gid = GameId.parse(self.game_id)
        object.__setattr__(self, "game_id", gid.value)
        if not self.competition_id:
            object.__setattr__(self, "competition_id", f"{gid.value}__{self.agent_a}__vs__{self.agent_b}")
        if self.valid_matches_target < 1:
            raise ConfigError("valid_matches_target must be positive")
        if self.alternate_first_player and self.sequential and self.valid_matches_target % 2:
            raise ConfigError("valid_matches_target must be even when first-player alternation is on")
        if self.agent_a == self.agent_b:
            raise ConfigError("a competition needs two distinct agent ids")

    @property
    def sequential(self) -> bool:
        return not get_game(self.game_id).spec.simultaneous

    @property
    def attempt_cap(self) -> int:
        return self.attempt_cap_factor * self.valid_matches_target


@dataclass(frozen=True)
class TournamentConfig:
    agents: Mapping[str, Mapping[str, Any]]
    competitions: tuple[CompetitionConfig, ...]
    output_dir: str = "out"
    common_opponent: str | None = None
    parallelism: int = 1
    base_seed: int = 0

    def __post_init__(self):
        ids = [c.competition_id for c in self.competitions]
        if len(ids) != len(set(ids)):
            raise ConfigError("competition ids must be unique")
        for c in self.competitions:
            for a in (c.agent_a, c.agent_b):
                if a not in self.agents:
                    raise ConfigError(f"competition {c.competition_id} uses unknown agent {a!r}")


# --- loading -------------------------------------------------------------------

def parse_value(text: str) -> Any:
    """A TOML scalar/array if it parses as one, else the raw string."""
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_overrides(data: dict, overrides: list[str] | None) -> dict:
    """Apply ``key.path=value`` overrides to a nested config dict."""
    data = copy.deepcopy(data)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override must look like key=value: {item!r}")
        key, value = item.split("=", 1)
        parts = key.strip().split(".")
        node = data
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"cannot set {key}: {part} is not a table")
        node[parts[-1]] = parse_value(value.strip())
    return data


def read_config(path: str | Path, overrides: list[str] | None = None) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config not found: {p}")
    try:
        data = tomllib.loads(p.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad config {p}: {exc}") from exc
    return apply_overrides(data, overrides)


def _validate_agent(agent_id: str, spec: Mapping) -> None:
    kind = spec.get("kind")
    if kind not in AGENT_KINDS:
        raise ConfigError(f"agent {agent_id!r}: kind must be one of {AGENT_KINDS}, got {kind!r}")
    if kind == "scripted" and not spec.get("actions"):
        raise ConfigError(f"agent {agent_id!r}: scripted agents need an actions list")
    if kind == "llm":
        client = spec.get("client", "http")
        if client not in ("http", "scripted", "random_legal"):
            raise ConfigError(f"agent {agent_id!r}: unknown client {client!r}")
        if client == "http" and not (spec.get("endpoint") and spec.get("model")):
            raise ConfigError(f"agent {agent_id!r}: http clients need endpoint and model")
        if client == "scripted" and not spec.get("script"):
            raise ConfigError(f"agent {agent_id!r}: scripted clients need a script file")


def tournament_from_dict(data: Mapping) -> TournamentConfig:
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version}")
    agents = {**BUILTIN_AGENTS, **{k: dict(v) for k, v in data.get("agents", {}).items()}}
    for agent_id, spec in agents.items():
        _validate_agent(agent_id, spec)
    base_seed = int(data.get("base_seed", 0))
    parallelism = int(data.get("parallelism", 1))
    defaults = {
        "valid_matches_target": int(data.get("valid_matches_target", 50)),
        "alternate_first_player": bool(data.get("alternate_first_player", True)),
        "attempt_cap_factor": int(data.get("attempt_cap_factor", 4)),
        "base_seed": base_seed,
        "parallelism": parallelism,
    }
    game_params = data.get("game_params", {})
    raw = list(data.get("competitions", []))
    common = data.get("common_opponent")
    if not raw:
        declared = sorted(data.get("agents", {}))
        if common is not None:
            pairs = [(a, common) for a in declared if a != common]
        else:
            pairs = [(a, b) for i, a in enumerate(declared) for b in declared[i + 1:]]
        raw = [{"game": g, "agent_a": a, "agent_b": b} for g in data.get("games", []) for a, b in pairs]
    comps = []
    try:
        for c in raw:
            gid = GameId.parse(c["game"]).value
            kw = {**defaults, **{k: c[k] for k in defaults if k in c}}
            comps.append(CompetitionConfig(gid, c["agent_a"], c["agent_b"],
                                           game_params=dict(game_params.get(gid, {})),
                                           competition_id=c.get("id", ""), **kw))
    except KeyError as exc:
        raise ConfigError(f"competition entry missing {exc}") from exc
    if not comps:
        raise ConfigError("config defines no competitions")
    return TournamentConfig(agents, tuple(comps), str(data.get("output_dir", "out")), common,
                            parallelism, base_seed)


def load_tournament(path: str | Path, overrides: list[str] | None = None) -> TournamentConfig:
    return tournament_from_dict(read_config(path, overrides))


def check_credentials(agents: Mapping[str, Mapping]) -> None:
    for agent_id, spec in agents.items():
        if spec.get("kind") == "llm" and spec.get("client", "http") == "http":
            env = spec.get("api_key_env", "OPENAI_API_KEY")
            if not os.environ.get(env):
                raise ConfigError(f"agent {agent_id!r}: missing credentials (set {env})")


# --- agent factory ------------------------------------------------------------------

def build_agent(agent_id: str, spec: Mapping[str, Any], match_seed: int):
    """Fresh agent for one match; its randomness derives from the match seed."""
    from gamearena.llm import (ChatParams, HttpChatClient, LLMAgent, RandomLegalClient, ReasoningConfig,
                               ScriptedClient)
    from gamearena.solvers import MctsAgent, MctsConfig, RandomAgent, ScriptedPolicy, TitForTatAgent

    seed = derive_seed(match_seed, "agent", agent_id)
    kind = spec["kind"]
    if kind == "random":
        return RandomAgent(agent_id, seed)
    if kind == "mcts":
        m = spec.get("mcts", {})
        cfg = MctsConfig(num_simulations=int(m.get("simulations", 1000)),
                         exploration_constant=float(m.get("c", math.sqrt(2))),
                         max_rollout_depth=int(m.get("max_rollout_depth", 200)),
                         determinizations=int(m.get("determinizations", 20)))
        return MctsAgent(agent_id, cfg, seed)
    if kind == "tft":
        return TitForTatAgent(agent_id)
    if kind == "scripted":
        return ScriptedPolicy(agent_id, spec["actions"], cycle=bool(spec.get("cycle", True)))
    # llm
    client_kind = spec.get("client", "http")
    if client_kind == "random_legal":
        client = RandomLegalClient(seed, float(spec.get("illegal_rate", 0.0)))
    elif client_kind == "scripted":
        client = ScriptedClient.from_file(spec["script"])
    else:
        client = HttpChatClient.from_env(spec["endpoint"], spec["model"], spec.get("api_key_env", "OPENAI_API_KEY"),
                                         timeout=float(spec.get("timeout", 120.0)))
    r = spec.get("reasoning", {})
    reasoning = ReasoningConfig(style=r.get("style", "prompt"),
                                sc_trajectories=int(r.get("sc_trajectories", 5)),
                                tot_candidates=int(r.get("tot_candidates", 3)),
                                tot_votes=int(r.get("tot_votes", 3)))
    params = ChatParams(temperature=float(spec.get("temperature", 0.2)),
                        max_tokens=int(spec.get("max_tokens", 1024)))
    return LLMAgent(agent_id, client, reasoning, params, float(spec.get("timeout", 120.0)),
                    int(spec.get("retries", 0)))
