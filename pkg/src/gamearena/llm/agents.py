"""Prompt, CoT, SC-CoT and ToT policies over a chat client."""

from __future__ import annotations

import re
import time
from collections import Counter
from dataclasses import dataclass

from gamearena.core import GameState, ObservationView, observe
from gamearena.llm.client import ChatClient, ChatParams, chat_complete
from gamearena.match import AgentTimeoutError, Decision
from gamearena.prompts.adapter import ParseResult, compose, majority_vote, parse_action

STYLES = ("prompt", "cot", "sc_cot", "tot")
_BEST = re.compile(r"The best choice is\s*\{?\s*(\d+)")


@dataclass(frozen=True)
class ReasoningConfig:
    style: str = "prompt"
    sc_trajectories: int = 5
    tot_candidates: int = 3
    tot_votes: int = 3

    def __post_init__(self):
        if self.style not in STYLES:
            raise ValueError(f"reasoning style must be one of {STYLES}, got {self.style!r}")
        if min(self.sc_trajectories, self.tot_candidates, self.tot_votes) < 1:
            raise ValueError("trajectory, candidate and vote counts must be >= 1")

    @property
    def completions_per_move(self) -> int:
        return {"prompt": 1, "cot": 1, "sc_cot": self.sc_trajectories,
                "tot": self.tot_candidates + self.tot_votes}[self.style]


def _ask(client, state, view, style, params, transcript, choices=None) -> list[str]:
    bundle = compose(state.spec.game_id, view, style, choices)
    texts = chat_complete(client, bundle.assembled, params)
    if transcript is not None:
        transcript.append((bundle.text(), texts))
    return texts


def _parse(state, view, text) -> ParseResult:
    return parse_action(state.spec.game_id, text, state, view.player)


def prompt_agent_act(view: ObservationView, client: ChatClient, state: GameState,
                     params: ChatParams = ChatParams(), transcript: list | None = None) -> ParseResult:
    (text,) = _ask(client, state, view, "prompt", params.with_samples(1), transcript)
    return _parse(state, view, text)


def cot_agent_act(view: ObservationView, client: ChatClient, state: GameState,
                  params: ChatParams = ChatParams(), transcript: list | None = None) -> ParseResult:
    (text,) = _ask(client, state, view, "cot", params.with_samples(1), transcript)
    return _parse(state, view, text)


def sc_cot_agent_act(view: ObservationView, client: ChatClient, state: GameState,
                     params: ChatParams = ChatParams(), transcript: list | None = None,
                     trajectories: int = 5) -> ParseResult:
    """Majority vote over the trajectories whose action parsed and is legal."""
    texts = _ask(client, state, view, "sc_cot", params.with_samples(trajectories), transcript)
    legal = [r.action for r in (_parse(state, view, t) for t in texts) if r.ok]
    raw = "\n\n".join(texts)
    if not legal:
        return ParseResult("no_action_found", None, raw)
    return ParseResult("ok", majority_vote(legal), raw)


def tot_agent_act(view: ObservationView, client: ChatClient, state: GameState,
                  params: ChatParams = ChatParams(), transcript: list | None = None,
                  candidates: int = 3, votes: int = 3) -> ParseResult:
    """One generate-then-vote round.

    Votes name candidates by 1-based index; votes that do not parse, or that
    point at a candidate without a legal action, are dropped. The most-voted
    candidate wins (lowest index on ties); with no usable votes the first
    legal candidate is played.
    """
    texts = _ask(client, state, view, "tot_step", params.with_samples(candidates), transcript)
    parsed = [_parse(state, view, t) for t in texts]
    usable = [i for i, r in enumerate(parsed) if r.ok]
    if not usable:
        return ParseResult("no_action_found", None, "\n\n".join(texts))
    ballots = _ask(client, state, view, "tot_vote", params.with_samples(votes), transcript, choices=texts)
    tally: Counter = Counter()
    for ballot in ballots:
        found = _BEST.findall(ballot)
        if found:
            idx = int(found[-1]) - 1
            if idx in usable:
                tally[idx] += 1
    winner = min(usable, key=lambda i: (-tally[i], i))
    return ParseResult("ok", parsed[winner].action, texts[winner])


_ACTS = {"prompt": prompt_agent_act, "cot": cot_agent_act}


class LLMAgent:
    """Seatable policy: observe, prompt, parse."""

    def __init__(self, agent_id: str, client: ChatClient, reasoning: ReasoningConfig = ReasoningConfig(),
                 params: ChatParams = ChatParams(), timeout: float = 120.0, retries: int = 0):
        if retries < 0:
            raise ValueError("retries must be >= 0")
        self.agent_id = agent_id
        self.client = client
        self.reasoning = reasoning
        self.params = params
        self.timeout = timeout
        self.retries = retries

    def _once(self, view, state, transcript) -> ParseResult:
        r = self.reasoning
        if r.style == "sc_cot":
            return sc_cot_agent_act(view, self.client, state, self.params, transcript, r.sc_trajectories)
        if r.style == "tot":
            return tot_agent_act(view, self.client, state, self.params, transcript, r.tot_candidates, r.tot_votes)
        return _ACTS[r.style](view, self.client, state, self.params, transcript)

    def act(self, state: GameState, player: int) -> Decision:
        """One move. With ``retries`` > 0 an unusable answer is asked again, same prompt."""
        view = observe(state, player)
        transcript: list = []
        start = time.monotonic()
        for _ in range(self.retries + 1):
            result = self._once(view, state, transcript)
            if result.ok:
                break
        if time.monotonic() - start > self.timeout:
            raise AgentTimeoutError(f"move took longer than {self.timeout}s")
        prompt = transcript[0][0] if transcript else None
        gens = [g for _, texts in transcript for g in texts]
        generation = gens[0] if len(gens) == 1 else gens
        return Decision(result.action, result.status, prompt, generation)
