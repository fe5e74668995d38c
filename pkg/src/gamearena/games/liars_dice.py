from __future__ import annotations

import re
from typing import NamedTuple

from gamearena.core import GameId, GameSpec, chance_draw
from gamearena.games.base import ActionSyntaxError, Game

FACES = 6
MAX_QUANTITY = 2  # two players, one die each
NUM_BIDS = MAX_QUANTITY * FACES
LIAR = NUM_BIDS


def bid_index(quantity: int, face: int) -> int:
    """Bids are totally ordered by quantity, then face."""
    return (quantity - 1) * FACES + (face - 1)


def bid_of(index: int) -> tuple[int, int]:
    q, v = divmod(index, FACES)
    return q + 1, v + 1


class LiarsDicePos(NamedTuple):
    dice: tuple[int, int]
    bids: tuple[int, ...]  # standing bid chain, as bid indices
    to_move: int
    winner: int  # -1 until someone calls Liar


class LiarsDice(Game):
    """Two players, one hidden d6 each. Faces are not wild.

    Moves are bid indices ``0..11`` or ``LIAR``.
    """

    spec = GameSpec(GameId.LIARS_DICE, "sequential", zero_sum=True, has_chance=True,
                    first_player_advantage=False, complete_information=False)
    pattern = re.compile(r"<\s*(?:-?\d+\s*dices?\s*,\s*-?\d+\s*values?|liar)\s*>", re.IGNORECASE)
    _strict = re.compile(r"<\s*(\d+)\s*dices?\s*,\s*(\d+)\s*values?\s*>", re.IGNORECASE)
    hidden_information = True

    def initial(self, seed):
        dice = (1 + chance_draw(seed, "liars_dice.roll", 0, FACES),
                1 + chance_draw(seed, "liars_dice.roll", 1, FACES))
        return LiarsDicePos(dice, (), 0, -1)

    def chance_deals(self) -> list[tuple[float, LiarsDicePos]]:
        p = 1 / FACES**2
        return [(p, LiarsDicePos((a, b), (), 0, -1))
                for a in range(1, FACES + 1) for b in range(1, FACES + 1)]

    def to_move(self, pos):
        return pos.to_move

    def is_terminal(self, pos):
        return pos.winner >= 0

    def legal(self, pos, player):
        if pos.winner >= 0 or player != pos.to_move:
            return []
        if not pos.bids:
            return list(range(NUM_BIDS))
        return list(range(pos.bids[-1] + 1, NUM_BIDS)) + [LIAR]

    def step(self, pos, move, seed=0):
        mover = pos.to_move
        if move == LIAR:
            quantity, face = bid_of(pos.bids[-1])
            count = sum(1 for d in pos.dice if d == face)
            winner = 1 - mover if count >= quantity else mover
            return LiarsDicePos(pos.dice, pos.bids, 1 - mover, winner)
        return LiarsDicePos(pos.dice, pos.bids + (move,), 1 - mover, -1)

    def returns(self, pos):
        if pos.winner < 0:
            return (0.0, 0.0)
        return (1.0, -1.0) if pos.winner == 0 else (-1.0, 1.0)

    def render(self, move):
        if move == LIAR:
            return "<Liar>"
        q, v = bid_of(move)
        return f"<{q} dices, {v} value>"

    def parse(self, surface):
        text = surface.strip()
        if text.strip("<>").strip().lower() == "liar":
            return LIAR
        m = self._strict.fullmatch(text)
        if not m:
            raise ActionSyntaxError(f"not a Liar's Dice move: {surface!r}")
        q, v = int(m.group(1)), int(m.group(2))
        if not (1 <= q <= MAX_QUANTITY and 1 <= v <= FACES):
            raise ActionSyntaxError(f"bid out of range: {surface!r}")
        return bid_index(q, v)

    def observe(self, pos, player, history):
        last = next((tok.surface for p, tok in reversed(history) if p != player), None)
        return {"face_value": pos.dice[player], "opponent_last_action": last}

    def infoset(self, pos, player) -> tuple:
        return (pos.dice[player], pos.bids)

    def determinize(self, pos, player, rng):
        other = rng.randint(1, FACES)
        dice = (pos.dice[0], other) if player == 0 else (other, pos.dice[1])
        return LiarsDicePos(dice, pos.bids, pos.to_move, pos.winner)
