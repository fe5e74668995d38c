from __future__ import annotations

import re
from typing import NamedTuple

from gamearena.core import GameId, GameSpec, chance_draw
from gamearena.games.base import SIMULTANEOUS, ActionSyntaxError, Game


class AuctionPos(NamedTuple):
    valuations: tuple[int, int]
    bids: tuple[int, int] | None
    winner: int


class BlindAuction(Game):
    """Single-round first-price sealed-bid auction.

    Valuations are uniform integers in ``[1, max_valuation]``; the highest bid wins
    and pays its bid, ties go to a seeded fair coin.
    """

    spec = GameSpec(GameId.BLIND_AUCTION, "simultaneous", zero_sum=False, has_chance=True,
                    first_player_advantage=False, complete_information=False)
    pattern = re.compile(r"<\s*-?\d+\s*>")
    _strict = re.compile(r"<\s*(\d+)\s*>")
    hidden_information = True

    def __init__(self, max_valuation: int = 10):
        self.max_valuation = max_valuation
        self.reward_range = (0.0, float(max_valuation))

    def params(self):
        return {} if self.max_valuation == 10 else {"max_valuation": self.max_valuation}

    def initial(self, seed):
        vals = tuple(1 + chance_draw(seed, "auction.valuation", p, self.max_valuation) for p in (0, 1))
        return AuctionPos(vals, None, -1)

    def to_move(self, pos):
        return SIMULTANEOUS

    def is_terminal(self, pos):
        return pos.bids is not None

    def legal(self, pos, player):
        if pos.bids is not None:
            return []
        return list(range(pos.valuations[player] + 1))

    def step(self, pos, move, seed=0):
        b0, b1 = move
        if b0 != b1:
            winner = 0 if b0 > b1 else 1
        else:
            winner = chance_draw(seed, "auction.tie", 0, 2)
        return AuctionPos(pos.valuations, (b0, b1), winner)

    def returns(self, pos):
        if pos.bids is None:
            return (0.0, 0.0)
        w = pos.winner
        surplus = float(pos.valuations[w] - pos.bids[w])
        return (surplus, 0.0) if w == 0 else (0.0, surplus)

    def winner(self, pos):
        return pos.winner if pos.winner >= 0 else None

    def render(self, move):
        return f"<{move}>"

    def parse(self, surface):
        m = self._strict.fullmatch(surface.strip())
        if not m:
            raise ActionSyntaxError(f"not a bid: {surface!r}")
        return int(m.group(1))

    def observe(self, pos, player, history):
        return {"valuation": pos.valuations[player]}

    def determinize(self, pos, player, rng):
        other = rng.randint(1, self.max_valuation)
        vals = (pos.valuations[0], other) if player == 0 else (other, pos.valuations[1])
        return AuctionPos(vals, pos.bids, pos.winner)
