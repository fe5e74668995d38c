from __future__ import annotations

import re
from typing import NamedTuple

from gamearena.core import GameId, GameSpec
from gamearena.games.base import ActionSyntaxError, Game, history_split

COLS, ROWS = 3, 8
EMPTY, BLACK, WHITE = 0, 1, 2
COLUMN_LETTERS = "abc"
# Player 0 is black: starts on rows 7-8 and moves towards row 1. Player 1 is white.
_PIECE = (BLACK, WHITE)
_DIRECTION = (-1, +1)
_GOAL_ROW = (1, ROWS)


def square(col: int, row: int) -> int:
    """0-based column, 1-based row -> board index."""
    return (row - 1) * COLS + col


def coords(index: int) -> tuple[int, int]:
    row0, col = divmod(index, COLS)
    return col, row0 + 1


class BreakthroughPos(NamedTuple):
    board: tuple[int, ...]
    to_move: int
    winner: int  # -1 while running


def _initial_board() -> tuple[int, ...]:
    board = [EMPTY] * (COLS * ROWS)
    for col in range(COLS):
        for row in (1, 2):
            board[square(col, row)] = WHITE
        for row in (ROWS - 1, ROWS):
            board[square(col, row)] = BLACK
    return tuple(board)


class Breakthrough(Game):
    """Breakthrough on a 3-column, 8-row board. Moves are ``(from, to, capture)``."""

    spec = GameSpec(GameId.BREAKTHROUGH, "sequential", zero_sum=True, has_chance=False,
                    first_player_advantage=False, complete_information=True)
    pattern = re.compile(r"<\s*[A-Za-z]\d+\s*-\s*>\s*[A-Za-z]\d+\s*\*?\s*>")
    _strict = re.compile(r"<\s*([a-cA-C])([1-8])\s*->\s*([a-cA-C])([1-8])(\*?)\s*>")

    def initial(self, seed):
        return BreakthroughPos(_initial_board(), 0, -1)

    def to_move(self, pos):
        return pos.to_move

    def is_terminal(self, pos):
        return pos.winner >= 0

    def legal(self, pos, player):
        if pos.winner >= 0 or player != pos.to_move:
            return []
        board = pos.board
        mine = _PIECE[player]
        theirs = _PIECE[1 - player]
        dr = _DIRECTION[player]
        moves = []
        for idx, cell in enumerate(board):
            if cell != mine:
                continue
            col, row = coords(idx)
            nrow = row + dr
            if not 1 <= nrow <= ROWS:
                continue
            for dc in (-1, 0, 1):
                ncol = col + dc
                if not 0 <= ncol < COLS:
                    continue
                dest = square(ncol, nrow)
                target = board[dest]
                if target == EMPTY:
                    moves.append((idx, dest, False))
                elif dc and target == theirs:
                    moves.append((idx, dest, True))
        return moves

    def step(self, pos, move, seed=0):
        src, dest, _ = move
        p = pos.to_move
        board = list(pos.board)
        board[dest] = board[src]
        board[src] = EMPTY
        board = tuple(board)
        winner = -1
        if coords(dest)[1] == _GOAL_ROW[p] or _PIECE[1 - p] not in board:
            winner = p
        return BreakthroughPos(board, 1 - p, winner)

    def returns(self, pos):
        if pos.winner < 0:
            return (0.0, 0.0)
        return (1.0, -1.0) if pos.winner == 0 else (-1.0, 1.0)

    def render(self, move):
        src, dest, capture = move
        (c0, r0), (c1, r1) = coords(src), coords(dest)
        star = "*" if capture else ""
        return f"<{COLUMN_LETTERS[c0]}{r0}->{COLUMN_LETTERS[c1]}{r1}{star}>"

    def parse(self, surface):
        m = self._strict.fullmatch(surface.strip())
        if not m:
            raise ActionSyntaxError(f"not a Breakthrough move: {surface!r}")
        c0 = COLUMN_LETTERS.index(m.group(1).lower())
        c1 = COLUMN_LETTERS.index(m.group(3).lower())
        return (square(c0, int(m.group(2))), square(c1, int(m.group(4))), m.group(5) == "*")

    def match_legal(self, parsed, legal):
        if parsed in legal:
            return parsed
        # The capture star may be omitted; it may not be invented.
        src, dest, capture = parsed
        if not capture and (src, dest, True) in legal:
            return (src, dest, True)
        return None

    def observe(self, pos, player, history):
        own, other = history_split(history, player)
        return {"board_preview": self.board_preview(pos), "opponent_moves": other, "self_moves": own}

    @staticmethod
    def board_preview(pos: BreakthroughPos) -> str:
        glyph = {EMPTY: ".", BLACK: "b", WHITE: "w"}
        lines = []
        for row in range(ROWS, 0, -1):
            cells = "".join(glyph[pos.board[square(c, row)]] for c in range(COLS))
            lines.append(f"{row}{cells}")
        lines.append(" " + COLUMN_LETTERS)
        return "\n".join(lines)

    @staticmethod
    def from_rows(rows: dict[int, str], to_move: int) -> BreakthroughPos:
        """Build a position from ``{row: "b.w"}`` strings; unspecified rows are empty."""
        board = [EMPTY] * (COLS * ROWS)
        code = {".": EMPTY, "b": BLACK, "w": WHITE}
        for row, text in rows.items():
            for col, ch in enumerate(text):
                board[square(col, row)] = code[ch]
        return BreakthroughPos(tuple(board), to_move, -1)
