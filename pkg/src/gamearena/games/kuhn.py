from __future__ import annotations

import re
from itertools import permutations
from typing import NamedTuple

from gamearena.core import GameId, GameSpec, chance_draw
from gamearena.games.base import ActionSyntaxError, Game, history_split

CARD_NAMES = "JQK"
PASS, BET = "p", "b"
TERMINAL_SEQUENCES = ("pp", "bp", "bb", "pbp", "pbb")


class KuhnPos(NamedTuple):
    cards: tuple[int, int]  # 0 = J, 1 = Q, 2 = K
    history: str  # betting sequence over {"p", "b"}


class KuhnPoker(Game):
    """One-round Kuhn poker: ante 1 each, single bet of 1, card order K > Q > J."""

    spec = GameSpec(GameId.KUHN_POKER, "sequential", zero_sum=True, has_chance=True,
                    first_player_advantage=True, complete_information=False)
    pattern = re.compile(r"<\s*(?:bet|pass)\s*>", re.IGNORECASE)
    reward_range = (-2.0, 2.0)
    hidden_information = True

    def initial(self, seed):
        first = chance_draw(seed, "kuhn.deal", 0, 3)
        rest = [c for c in range(3) if c != first]
        return KuhnPos((first, rest[chance_draw(seed, "kuhn.deal", 1, 2)]), "")

    def chance_deals(self) -> list[tuple[float, KuhnPos]]:
        return [(1 / 6, KuhnPos(cards, "")) for cards in permutations(range(3), 2)]

    def to_move(self, pos):
        return len(pos.history) % 2

    def is_terminal(self, pos):
        return pos.history in TERMINAL_SEQUENCES

    def legal(self, pos, player):
        if self.is_terminal(pos) or player != len(pos.history) % 2:
            return []
        return [BET, PASS]

    def step(self, pos, move, seed=0):
        return KuhnPos(pos.cards, pos.history + move)

    def returns(self, pos):
        h = pos.history
        if h not in TERMINAL_SEQUENCES:
            return (0.0, 0.0)
        if h == "bp":
            return (1.0, -1.0)
        if h == "pbp":
            return (-1.0, 1.0)
        stake = 2.0 if "b" in h else 1.0
        return (stake, -stake) if pos.cards[0] > pos.cards[1] else (-stake, stake)

    def render(self, move):
        return "<Bet>" if move == BET else "<Pass>"

    def parse(self, surface):
        word = surface.strip().strip("<>").strip().lower()
        if word == "bet":
            return BET
        if word == "pass":
            return PASS
        raise ActionSyntaxError(f"not a Kuhn poker move: {surface!r}")

    def observe(self, pos, player, history):
        own, other = history_split(history, player)
        return {"card": CARD_NAMES[pos.cards[player]], "self_moves": own, "opponent_moves": other}

    def infoset(self, pos, player) -> tuple:
        return (pos.cards[player], pos.history)

    def determinize(self, pos, player, rng):
        mine = pos.cards[player]
        other = rng.choice([c for c in range(3) if c != mine])
        cards = (mine, other) if player == 0 else (other, mine)
        return KuhnPos(cards, pos.history)
