from __future__ import annotations

import re
from typing import NamedTuple

from gamearena.core import GameId, GameSpec
from gamearena.games.base import SIMULTANEOUS, ActionSyntaxError, Game, history_split

SILENT, TESTIFY = "Silent", "Testify"

# Years in prison for (self, opponent); reward is 3 - years.
PRISON_YEARS = {
    (TESTIFY, SILENT): 0,
    (SILENT, TESTIFY): 3,
    (TESTIFY, TESTIFY): 2,
    (SILENT, SILENT): 1,
}


def round_payoffs(m0: str, m1: str) -> tuple[int, int]:
    return 3 - PRISON_YEARS[(m0, m1)], 3 - PRISON_YEARS[(m1, m0)]


class IPDPos(NamedTuple):
    rounds: tuple[tuple[str, str], ...]


class PrisonersDilemma(Game):
    """Iterated prisoner's dilemma with simultaneous moves and full history."""

    spec = GameSpec(GameId.PRISONERS_DILEMMA, "simultaneous", zero_sum=False, has_chance=False,
                    first_player_advantage=False, complete_information=True)
    pattern = re.compile(r"<\s*(?:silent|testify)\s*>", re.IGNORECASE)

    def __init__(self, rounds: int = 5):
        if rounds < 1:
            raise ValueError("rounds must be positive")
        self.rounds = rounds
        self.reward_range = (0.0, 3.0 * rounds)

    def params(self):
        return {} if self.rounds == 5 else {"rounds": self.rounds}

    def initial(self, seed):
        return IPDPos(())

    def to_move(self, pos):
        return SIMULTANEOUS

    def is_terminal(self, pos):
        return len(pos.rounds) >= self.rounds

    def legal(self, pos, player):
        if self.is_terminal(pos):
            return []
        return [SILENT, TESTIFY]

    def step(self, pos, move, seed=0):
        return IPDPos(pos.rounds + (tuple(move),))

    def payoff_series(self, pos) -> list[tuple[int, int]]:
        return [round_payoffs(a, b) for a, b in pos.rounds]

    def returns(self, pos):
        series = self.payoff_series(pos)
        return (float(sum(a for a, _ in series)), float(sum(b for _, b in series)))

    def winner(self, pos):
        return None

    def render(self, move):
        return f"<{move}>"

    def parse(self, surface):
        word = surface.strip().strip("<>").strip().lower()
        if word == "silent":
            return SILENT
        if word == "testify":
            return TESTIFY
        raise ActionSyntaxError(f"not a Prisoner's Dilemma move: {surface!r}")

    def observe(self, pos, player, history):
        own, other = history_split(history, player)
        return {"self_moves": own, "opponent_moves": other}
