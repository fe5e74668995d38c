from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import NamedTuple

from gamearena.core import GameId, GameSpec, chance_draw
from gamearena.games.base import ActionSyntaxError, Game

ITEMS = ("peppers", "strawberries", "cherries")
AGREE = ("A",)
PROPOSAL, UTTERANCE = "P", "U"
TOTAL_VALUE = 10


@lru_cache(maxsize=None)
def value_vectors(pool: tuple[int, ...], total: int = TOTAL_VALUE) -> tuple[tuple[int, ...], ...]:
    """All non-negative integer value vectors ``v`` with ``v . pool == total``."""
    ranges = [range(total // q + 1) for q in pool]
    return tuple(v for v in itertools.product(*ranges)
                 if sum(a * b for a, b in zip(v, pool)) == total)


@lru_cache(maxsize=None)
def _boxes(pool: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product(*(range(q + 1) for q in pool)))


class NegotiationPos(NamedTuple):
    pool: tuple[int, int, int]
    values: tuple[tuple[int, int, int], tuple[int, int, int]]
    turn: int  # completed proposal/utterance exchanges
    stage: str  # "proposal" | "utterance"
    proposals: tuple  # last proposal per player, or None
    utterances: tuple  # last utterance per player, or None
    agreed_by: int  # -1 until someone plays <Agree>


class Negotiation(Game):
    """Alternating-offers division of peppers, strawberries and cherries.

    Each turn the mover either agrees to the opponent's standing proposal or makes a
    proposal, then states an utterance (cheap talk, no payoff effect). On agreement the
    agreeing player receives the pool minus the opponent's proposal.
    """

    spec = GameSpec(GameId.NEGOTIATION, "sequential", zero_sum=False, has_chance=True,
                    first_player_advantage=False, complete_information=False)
    pattern = re.compile(
        r"<\s*(?:agree|(?:proposal|utterance)\s*:\s*\[[^\[\]<>]*\])\s*>", re.IGNORECASE)
    _strict = re.compile(
        r"<\s*(proposal|utterance)\s*:\s*\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]\s*>", re.IGNORECASE)
    reward_range = (0.0, float(TOTAL_VALUE))
    hidden_information = True

    def __init__(self, max_turns: int = 10, max_quantity: int = 5):
        self.max_turns = max_turns
        self.max_quantity = max_quantity

    def params(self):
        out = {}
        if self.max_turns != 10:
            out["max_turns"] = self.max_turns
        if self.max_quantity != 5:
            out["max_quantity"] = self.max_quantity
        return out

    def initial(self, seed):
        attempt = 0
        while True:
            pool = tuple(1 + chance_draw(seed, "negotiation.pool", 3 * attempt + i, self.max_quantity)
                         for i in range(3))
            options = value_vectors(pool)
            if options:
                break
            attempt += 1
        values = tuple(options[chance_draw(seed, "negotiation.values", p, len(options))] for p in (0, 1))
        return self.position(pool, values)

    @staticmethod
    def position(pool, values) -> NegotiationPos:
        return NegotiationPos(tuple(pool), tuple(tuple(v) for v in values), 0, "proposal",
                              (None, None), (None, None), -1)

    def to_move(self, pos):
        return pos.turn % 2

    def is_terminal(self, pos):
        return pos.agreed_by >= 0 or pos.turn >= self.max_turns

    def legal(self, pos, player):
        if self.is_terminal(pos) or player != pos.turn % 2:
            return []
        if pos.stage == "utterance":
            return [(UTTERANCE,) + box for box in _boxes(pos.pool)]
        moves = [(PROPOSAL,) + box for box in _boxes(pos.pool)]
        if pos.proposals[1 - player] is not None:
            moves.insert(0, AGREE)
        return moves

    def step(self, pos, move, seed=0):
        p = pos.turn % 2
        if move == AGREE:
            return pos._replace(agreed_by=p)
        kind, take = move[0], tuple(move[1:])
        if kind == PROPOSAL:
            proposals = (take, pos.proposals[1]) if p == 0 else (pos.proposals[0], take)
            return pos._replace(proposals=proposals, stage="utterance")
        utterances = (take, pos.utterances[1]) if p == 0 else (pos.utterances[0], take)
        return pos._replace(utterances=utterances, stage="proposal", turn=pos.turn + 1)

    def allocations(self, pos) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        if pos.agreed_by < 0:
            return None
        agreer = pos.agreed_by
        theirs = pos.proposals[1 - agreer]
        mine = tuple(q - t for q, t in zip(pos.pool, theirs))
        return (mine, theirs) if agreer == 0 else (theirs, mine)

    def returns(self, pos):
        alloc = self.allocations(pos)
        if alloc is None:
            return (0.0, 0.0)
        return tuple(float(sum(v * a for v, a in zip(pos.values[p], alloc[p]))) for p in (0, 1))

    def winner(self, pos):
        return None

    def render(self, move):
        if move == AGREE:
            return "<Agree>"
        label = "Proposal" if move[0] == PROPOSAL else "Utterance"
        return f"<{label}: [{move[1]}, {move[2]}, {move[3]}]>"

    def parse(self, surface):
        text = surface.strip()
        if text.strip("<>").strip().lower() == "agree":
            return AGREE
        m = self._strict.fullmatch(text)
        if not m:
            raise ActionSyntaxError(f"not a Negotiation move: {surface!r}")
        kind = PROPOSAL if m.group(1).lower() == "proposal" else UTTERANCE
        return (kind, int(m.group(2)), int(m.group(3)), int(m.group(4)))

    def observe(self, pos, player, history):
        zero = [0, 0, 0]
        other = 1 - player
        view = {
            "turn_type": pos.stage,
            "item_pool": list(pos.pool),
            "self_value_vector": list(pos.values[player]),
            "opponent_utterance_take": list(pos.utterances[other] or zero),
        }
        if pos.stage == "proposal":
            view["opponent_proposal_take"] = list(pos.proposals[other] or zero)
        else:
            view["agent_proposal_take"] = list(pos.proposals[player] or zero)
        return view

    def determinize(self, pos, player, rng):
        other = rng.choice(value_vectors(pos.pool))
        values = (pos.values[0], other) if player == 0 else (other, pos.values[1])
        return pos._replace(values=values)
