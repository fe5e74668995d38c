"""Single-match loop and the replayable match record."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Protocol, Sequence

from gamearena.core import (
    ActionToken,
    GameState,
    Outcome,
    apply,
    legal_actions,
    new_match,
    outcome,
)

ILLEGAL_ACTION = "illegal action"
CAUSES = {
    "illegal": ILLEGAL_ACTION,
    "no_action_found": "no action found",
    "malformed": "malformed action",
}


class AgentError(Exception):
    cause = "agent error"


class AgentTransportError(AgentError):
    cause = "agent transport"


class AgentTimeoutError(AgentError):
    cause = "agent timeout"


@dataclass(frozen=True)
class Decision:
    """What an agent produced for one turn."""

    action: ActionToken | None
    status: str = "ok"  # ok | no_action_found | malformed | illegal
    prompt: str | None = None
    generation: str | list[str] | None = None


class Agent(Protocol):
    agent_id: str

    def act(self, state: GameState, player: int) -> Decision | ActionToken: ...


@dataclass
class TurnRecord:
    player: int
    action: str | None
    legal: bool
    prompt: str | None = None
    generation: str | list[str] | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"player": self.player}
        if self.prompt is not None:
            out["prompt"] = self.prompt
        if self.generation is not None:
            out["generation"] = self.generation
        out["action"] = self.action
        out["legal"] = self.legal
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TurnRecord":
        return cls(data["player"], data["action"], data["legal"], data.get("prompt"), data.get("generation"))


@dataclass
class MatchRecord:
    game: str
    seed: int
    agents: list[str]
    turns: list[TurnRecord] = field(default_factory=list)
    outcome: Outcome | None = None
    valid: bool = False
    invalid_cause: str | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "game": self.game,
            "seed": self.seed,
            "agents": list(self.agents),
            "turns": [t.to_json() for t in self.turns],
            "outcome": self.outcome.to_json() if self.outcome else None,
            "valid": self.valid,
        }
        if self.invalid_cause is not None:
            out["invalid_cause"] = self.invalid_cause
        return out

    def to_line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "MatchRecord":
        oc = data.get("outcome")
        return cls(
            game=data["game"],
            seed=data["seed"],
            agents=list(data["agents"]),
            turns=[TurnRecord.from_json(t) for t in data["turns"]],
            outcome=Outcome.from_json(oc) if oc else None,
            valid=data["valid"],
            invalid_cause=data.get("invalid_cause"),
        )

    def seat_of(self, agent_id: str) -> int:
        return self.agents.index(agent_id)


def write_jsonl(records: Iterable[MatchRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_line() + "\n")


def read_jsonl(path) -> Iterator[MatchRecord]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield MatchRecord.from_json(json.loads(line))


def _decide(agent: Agent, state: GameState, player: int) -> Decision:
    result = agent.act(state, player)
    return result if isinstance(result, Decision) else Decision(result)


def run_match(game_id, agents: Sequence[Agent], seed: int, game_params: dict | None = None) -> MatchRecord:
    """Play one match to the end, or until the first illegal or missing action.

    Agent ``i`` sits in seat ``i``. The record is valid iff every action was legal.
    """
    state = new_match(game_id, seed, **(game_params or {}))
    record = MatchRecord(str(state.spec.game_id), seed, [a.agent_id for a in agents])
    while not state.terminal:
        players = (0, 1) if state.current_player == "both" else (state.current_player,)
        chosen = []
        for p in players:
            try:
                decision = _decide(agents[p], state, p)
            except AgentError as exc:
                record.invalid_cause = exc.cause
                return record
            token = decision.action
            legal = decision.status == "ok" and token is not None and token in legal_actions(state, p)
            record.turns.append(TurnRecord(p, token.surface if token else None, legal,
                                           decision.prompt, decision.generation))
            if not legal:
                record.invalid_cause = CAUSES.get(decision.status, ILLEGAL_ACTION)
                return record
            chosen.append(token)
        state = apply(state, tuple(chosen) if len(chosen) == 2 else chosen[0])
    record.outcome = outcome(state)
    record.valid = True
    return record


def replay(record: MatchRecord, game_params: dict | None = None) -> GameState:
    """Rebuild the final state of a valid record from its seed and actions."""
    state = new_match(record.game, record.seed, **(game_params or {}))
    pending: list[str] = []
    for turn in record.turns:
        if state.current_player == "both":
            pending.append(turn.action)
            if len(pending) == 2:
                state = apply(state, tuple(pending))
                pending = []
        else:
            state = apply(state, turn.action)
    return state
