"""Random baseline and Tit-for-Tat."""

from __future__ import annotations

import random
from typing import Sequence

from gamearena.core import ActionToken, GameError, GameId, GameState, TerminalStateError, legal_actions
from gamearena.games.prisoners_dilemma import SILENT

SILENT_TOKEN = ActionToken("<Silent>", SILENT)


def random_act(state: GameState, player: int, seed: "int | random.Random") -> ActionToken:
    """Uniform choice over the legal actions, from the caller's own stream."""
    if state.terminal:
        raise TerminalStateError("random_act on a terminal state")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    actions = legal_actions(state, player)
    return actions[rng.randrange(len(actions))]


def tit_for_tat_act(history: Sequence[tuple[int, ActionToken]], player: int,
                    game_id: GameId | str = GameId.PRISONERS_DILEMMA) -> ActionToken:
    """Cooperate first, then copy the opponent's previous move."""
    if GameId.parse(game_id) is not GameId.PRISONERS_DILEMMA:
        raise GameError("Tit-for-Tat only plays the iterated prisoner's dilemma")
    for p, token in reversed(history):
        if p != player:
            return token
    return SILENT_TOKEN
