from __future__ import annotations

import re
from typing import NamedTuple

from gamearena.core import GameId, GameSpec
from gamearena.games.base import ActionSyntaxError, Game

INITIAL_PILES = (1, 3, 5, 7)


class NimPos(NamedTuple):
    piles: tuple[int, ...]
    to_move: int
    loser: int  # -1 while running; the player who took the final match


class Nim(Game):
    """Misère Nim on piles (1, 3, 5, 7): taking the last match loses.

    Moves are ``(pile_index, take)`` with a 0-based pile index.
    """

    spec = GameSpec(GameId.NIM, "sequential", zero_sum=True, has_chance=False,
                    first_player_advantage=True, complete_information=True)
    pattern = re.compile(r"<\s*pile\s*:\s*-?\d+\s*,\s*take\s*:\s*-?\d+\s*>", re.IGNORECASE)
    _strict = re.compile(r"<\s*pile\s*:\s*(\d+)\s*,\s*take\s*:\s*(\d+)\s*>", re.IGNORECASE)

    def __init__(self, piles: tuple[int, ...] = INITIAL_PILES):
        self.initial_piles = tuple(piles)

    def params(self):
        return {} if self.initial_piles == INITIAL_PILES else {"piles": list(self.initial_piles)}

    def initial(self, seed):
        return NimPos(self.initial_piles, 0, -1)

    def to_move(self, pos):
        return pos.to_move

    def is_terminal(self, pos):
        return pos.loser >= 0

    def legal(self, pos, player):
        if pos.loser >= 0 or player != pos.to_move:
            return []
        return [(i, k) for i, n in enumerate(pos.piles) for k in range(1, n + 1)]

    def step(self, pos, move, seed=0):
        i, k = move
        piles = pos.piles[:i] + (pos.piles[i] - k,) + pos.piles[i + 1:]
        loser = pos.to_move if not any(piles) else -1
        return NimPos(piles, 1 - pos.to_move, loser)

    def returns(self, pos):
        if pos.loser < 0:
            return (0.0, 0.0)
        return (-1.0, 1.0) if pos.loser == 0 else (1.0, -1.0)

    def render(self, move):
        return f"<pile:{move[0] + 1}, take:{move[1]}>"

    def parse(self, surface):
        m = self._strict.fullmatch(surface.strip())
        if not m:
            raise ActionSyntaxError(f"not a Nim move: {surface!r}")
        pile, take = int(m.group(1)), int(m.group(2))
        if not 1 <= pile <= len(self.initial_piles) or take < 1:
            raise ActionSyntaxError(f"pile/take out of range: {surface!r}")
        return (pile - 1, take)

    def observe(self, pos, player, history):
        return {"piles": list(pos.piles)}

    def position(self, piles, to_move=0) -> NimPos:
        piles = tuple(piles)
        return NimPos(piles, to_move, -1)
