from __future__ import annotations

import re
from typing import NamedTuple

from gamearena.core import GameId, GameSpec
from gamearena.games.base import ActionSyntaxError, Game, history_split

ROWS, COLS = 6, 7
ONGOING, DRAW = -1, 2
_STRIDE = ROWS + 1  # one sentinel bit per column keeps shifted lines from wrapping


def _four(bits: int) -> bool:
    for shift in (1, _STRIDE, _STRIDE - 1, _STRIDE + 1):
        pairs = bits & (bits >> shift)
        if pairs & (pairs >> (2 * shift)):
            return True
    return False


class Connect4Pos(NamedTuple):
    discs: tuple[int, int]  # per-player bitboards, bit index col * 7 + row (row 0 at the bottom)
    heights: tuple[int, ...]
    to_move: int
    status: int


class Connect4(Game):
    """Seven columns, six rows, discs drop to the lowest free cell. Moves are 0-based columns."""

    spec = GameSpec(GameId.CONNECT4, "sequential", zero_sum=True, has_chance=False,
                    first_player_advantage=True, complete_information=True)
    pattern = re.compile(r"<\s*C\s*\d+\s*>")
    _strict = re.compile(r"<C([1-7])>")

    def initial(self, seed):
        return Connect4Pos((0, 0), (0,) * COLS, 0, ONGOING)

    def to_move(self, pos):
        return pos.to_move

    def is_terminal(self, pos):
        return pos.status != ONGOING

    def legal(self, pos, player):
        if pos.status != ONGOING or player != pos.to_move:
            return []
        return [c for c in range(COLS) if pos.heights[c] < ROWS]

    def step(self, pos, move, seed=0):
        p = pos.to_move
        h = pos.heights[move]
        mine = pos.discs[p] | (1 << (move * _STRIDE + h))
        discs = (mine, pos.discs[1]) if p == 0 else (pos.discs[0], mine)
        heights = pos.heights[:move] + (h + 1,) + pos.heights[move + 1:]
        if _four(mine):
            status = p
        elif sum(heights) == ROWS * COLS:
            status = DRAW
        else:
            status = ONGOING
        return Connect4Pos(discs, heights, 1 - p, status)

    def returns(self, pos):
        if pos.status in (0, 1):
            return (1.0, -1.0) if pos.status == 0 else (-1.0, 1.0)
        return (0.0, 0.0)

    def render(self, move):
        return f"<C{move + 1}>"

    def parse(self, surface):
        m = self._strict.fullmatch(surface.strip())
        if not m:
            raise ActionSyntaxError(f"not a Connect-4 move: {surface!r}")
        return int(m.group(1)) - 1

    def observe(self, pos, player, history):
        own, other = history_split(history, player)
        return {"opponent_moves": other, "self_moves": own}

    @staticmethod
    def grid(pos: Connect4Pos) -> list[list[int]]:
        """Rows bottom-up; cell is -1 empty or the owning player."""
        out = [[-1] * COLS for _ in range(ROWS)]
        for p in (0, 1):
            for c in range(COLS):
                for r in range(ROWS):
                    if pos.discs[p] >> (c * _STRIDE + r) & 1:
                        out[r][c] = p
        return out
