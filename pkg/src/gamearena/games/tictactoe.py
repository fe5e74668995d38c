from __future__ import annotations

import re
from typing import NamedTuple

from gamearena.core import GameId, GameSpec
from gamearena.games.base import ActionSyntaxError, Game, history_split

ONGOING, DRAW = -1, 2

LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)
_LINES_THROUGH = tuple(tuple(line for line in LINES if i in line) for i in range(9))


class TicTacToePos(NamedTuple):
    board: tuple[int, ...]  # 9 cells, row-major from R1; 0 empty, 1 X (player 0), 2 O (player 1)
    to_move: int
    status: int  # ONGOING, winning player, or DRAW


class TicTacToe(Game):
    """3x3 board, three in a row wins. Moves are cell indices ``(row - 1) * 3 + (col - 1)``."""

    spec = GameSpec(GameId.TIC_TAC_TOE, "sequential", zero_sum=True, has_chance=False,
                    first_player_advantage=True, complete_information=True)
    pattern = re.compile(r"<\s*C\s*\d+\s*R\s*\d+\s*>")
    _strict = re.compile(r"<C([1-3])R([1-3])>")

    def initial(self, seed):
        return TicTacToePos((0,) * 9, 0, ONGOING)

    def to_move(self, pos):
        return pos.to_move

    def is_terminal(self, pos):
        return pos.status != ONGOING

    def legal(self, pos, player):
        if pos.status != ONGOING or player != pos.to_move:
            return []
        return [i for i, c in enumerate(pos.board) if c == 0]

    def step(self, pos, move, seed=0):
        board = pos.board
        mark = pos.to_move + 1
        board = board[:move] + (mark,) + board[move + 1:]
        status = ONGOING
        for a, b, c in _LINES_THROUGH[move]:
            if board[a] == board[b] == board[c] == mark:
                status = pos.to_move
                break
        else:
            if 0 not in board:
                status = DRAW
        return TicTacToePos(board, 1 - pos.to_move, status)

    def returns(self, pos):
        if pos.status in (0, 1):
            return (1.0, -1.0) if pos.status == 0 else (-1.0, 1.0)
        return (0.0, 0.0)

    def render(self, move):
        row, col = divmod(move, 3)
        return f"<C{col + 1}R{row + 1}>"

    def parse(self, surface):
        m = self._strict.fullmatch(surface.strip())
        if not m:
            raise ActionSyntaxError(f"not a Tic-Tac-Toe move: {surface!r}")
        col, row = int(m.group(1)), int(m.group(2))
        return (row - 1) * 3 + (col - 1)

    def observe(self, pos, player, history):
        own, other = history_split(history, player)
        return {"opponent_moves": other, "self_moves": own}

    @staticmethod
    def from_marks(x_cells, o_cells, to_move=None) -> TicTacToePos:
        """Build a position from surface lists such as ``["C1R1", "C2R2"]``."""
        game = TicTacToe()
        board = [0] * 9
        for mark, cells in ((1, x_cells), (2, o_cells)):
            for cell in cells:
                cell = cell if cell.startswith("<") else f"<{cell}>"
                board[game.parse(cell)] = mark
        if to_move is None:
            to_move = 0 if board.count(1) == board.count(2) else 1
        pos = TicTacToePos(tuple(board), to_move, ONGOING)
        return TicTacToePos(pos.board, to_move, _status(pos.board))


def _status(board) -> int:
    for a, b, c in LINES:
        if board[a] and board[a] == board[b] == board[c]:
            return board[a] - 1
    return DRAW if 0 not in board else ONGOING
