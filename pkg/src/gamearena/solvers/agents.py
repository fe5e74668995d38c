"""Policy objects the match loop can seat."""

from __future__ import annotations

import itertools
import random
from typing import Iterable

from gamearena.core import GameState, derive_seed
from gamearena.match import AgentTransportError, Decision
from gamearena.solvers.mcts import MctsConfig, mcts_act
from gamearena.solvers.simple import random_act, tit_for_tat_act


class RandomAgent:
    def __init__(self, agent_id: str = "random", seed: int = 0):
        self.agent_id = agent_id
        self._rng = random.Random(seed)

    def act(self, state: GameState, player: int):
        return random_act(state, player, self._rng)


class MctsAgent:
    def __init__(self, agent_id: str = "mcts", config: MctsConfig | None = None, seed: int = 0):
        self.agent_id = agent_id
        self.config = config or MctsConfig()
        self.seed = seed

    def act(self, state: GameState, player: int):
        move_seed = derive_seed(self.seed, len(state.move_history), player)
        return mcts_act(state, player, self.config, move_seed)


class TitForTatAgent:
    def __init__(self, agent_id: str = "tft"):
        self.agent_id = agent_id

    def act(self, state: GameState, player: int):
        return tit_for_tat_act(state.move_history, player, state.spec.game_id)


class ScriptedPolicy:
    """Plays fixed action texts in order, each checked like an agent generation.

    With ``cycle`` the script repeats; otherwise running out is a transport failure.
    """

    def __init__(self, agent_id: str, actions: Iterable[str], cycle: bool = False):
        self.agent_id = agent_id
        self.actions = list(actions)
        self._feed = itertools.cycle(self.actions) if cycle else iter(self.actions)

    def act(self, state: GameState, player: int) -> Decision:
        from gamearena.prompts.adapter import parse_action

        try:
            text = next(self._feed)
        except StopIteration:
            raise AgentTransportError("script exhausted") from None
        result = parse_action(state.spec.game_id, text, state, player)
        return Decision(result.action, result.status, None, text)
