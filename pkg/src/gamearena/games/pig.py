from __future__ import annotations

import re
from typing import NamedTuple

from gamearena.core import GameId, GameSpec, chance_draw
from gamearena.games.base import ActionSyntaxError, Game

ROLL, STOP = "roll", "stop"
TARGET = 100


class PigPos(NamedTuple):
    scores: tuple[int, int]
    turn_total: int
    to_move: int
    rolls: int  # dice thrown so far; indexes the chance substream
    winner: int


class Pig(Game):
    """Dice game to 100: roll to grow the turn total, a 1 wipes it, stop to bank.

    Returns are win indicators ``(1, 0)`` / ``(0, 1)``.
    """

    spec = GameSpec(GameId.PIG, "sequential", zero_sum=False, has_chance=True,
                    first_player_advantage=False, complete_information=True)
    pattern = re.compile(r"<\s*(?:roll|stop)\s*>", re.IGNORECASE)
    reward_range = (0.0, 1.0)

    def __init__(self, target: int = TARGET):
        self.target = target

    def params(self):
        return {} if self.target == TARGET else {"target": self.target}

    def initial(self, seed):
        return PigPos((0, 0), 0, 0, 0, -1)

    def to_move(self, pos):
        return pos.to_move

    def is_terminal(self, pos):
        return pos.winner >= 0

    def legal(self, pos, player):
        if pos.winner >= 0 or player != pos.to_move:
            return []
        return [ROLL, STOP]

    def step(self, pos, move, seed=0):
        if move == ROLL:
            face = 1 + chance_draw(seed, "pig.roll", pos.rolls, 6)
            return self._after_roll(pos, face)
        return self._bank(pos)

    def step_distribution(self, pos, move) -> list[tuple[float, PigPos]]:
        if move == STOP:
            return [(1.0, self._bank(pos))]
        return [(1 / 6, self._after_roll(pos, face)) for face in range(1, 7)]

    def _after_roll(self, pos, face):
        if face == 1:
            return PigPos(pos.scores, 0, 1 - pos.to_move, pos.rolls + 1, -1)
        return PigPos(pos.scores, pos.turn_total + face, pos.to_move, pos.rolls + 1, -1)

    def _bank(self, pos):
        p = pos.to_move
        banked = pos.scores[p] + pos.turn_total
        scores = (banked, pos.scores[1]) if p == 0 else (pos.scores[0], banked)
        winner = p if banked >= self.target else -1
        return PigPos(scores, 0, 1 - p, pos.rolls, winner)

    def returns(self, pos):
        if pos.winner < 0:
            return (0.0, 0.0)
        return (1.0, 0.0) if pos.winner == 0 else (0.0, 1.0)

    def winner(self, pos):
        return pos.winner if pos.winner >= 0 else None

    def heuristic_returns(self, pos):
        a, b = pos.scores
        if a == b:
            return (0.5, 0.5)
        return (1.0, 0.0) if a > b else (0.0, 1.0)

    def render(self, move):
        return f"<{move}>"

    def parse(self, surface):
        word = surface.strip().strip("<>").strip().lower()
        if word in (ROLL, STOP):
            return word
        raise ActionSyntaxError(f"not a Pig move: {surface!r}")

    def observe(self, pos, player, history):
        return {
            "agent_current_score": pos.scores[player],
            "opponent_current_score": pos.scores[1 - player],
            "turn_total_score": pos.turn_total if pos.to_move == player else 0,
        }
