"""Rules interface shared by all games.

A :class:`Game` works on plain immutable positions (tuples / NamedTuples) and
parsed moves (ints / tuples). Keeping the rules layer free of wrapper objects
lets the tree search run directly on it.
"""

from __future__ import annotations

import random
import re
from typing import Any, Sequence

from gamearena.core import ActionToken, GameSpec, Outcome

SIMULTANEOUS = -1


class ActionSyntaxError(ValueError):
    """Text that does not follow the game's action grammar."""


def render_moves(surfaces: Sequence[str]) -> str:
    return ", ".join(surfaces) if surfaces else "None"


class Game:
    spec: GameSpec
    #: Matches one candidate action token inside free text.
    pattern: re.Pattern
    #: (low, high) bounds on a single player's return, used to normalise search values.
    reward_range: tuple[float, float] = (-1.0, 1.0)
    hidden_information = False

    @property
    def game_id(self):
        return self.spec.game_id

    # rules ---------------------------------------------------------------
    def initial(self, seed: int) -> Any:
        raise NotImplementedError

    def to_move(self, pos: Any) -> int:
        """Player index to act, or ``SIMULTANEOUS`` when both act at once."""
        raise NotImplementedError

    def is_terminal(self, pos: Any) -> bool:
        raise NotImplementedError

    def legal(self, pos: Any, player: int) -> list:
        raise NotImplementedError

    def step(self, pos: Any, move: Any, seed: int) -> Any:
        raise NotImplementedError

    def returns(self, pos: Any) -> tuple[float, float]:
        raise NotImplementedError

    def winner(self, pos: Any) -> int | None:
        r0, r1 = self.returns(pos)
        if r0 == r1:
            return None
        return 0 if r0 > r1 else 1

    def outcome(self, pos: Any) -> Outcome:
        returns = self.returns(pos)
        win = self.winner(pos)
        draw = self.spec.zero_sum and win is None
        return Outcome(returns, win, draw)

    # surface syntax ------------------------------------------------------
    def render(self, move: Any) -> str:
        raise NotImplementedError

    def parse(self, surface: str) -> Any:
        """Parse one bracketed token; raises :class:`ActionSyntaxError`."""
        raise NotImplementedError

    def token(self, move: Any) -> ActionToken:
        return ActionToken(self.render(move), move)

    def match_legal(self, parsed: Any, legal: list) -> Any | None:
        """Return the legal move ``parsed`` denotes, or ``None``."""
        return parsed if parsed in legal else None

    # information ---------------------------------------------------------
    def observe(self, pos: Any, player: int, history: Sequence[tuple[int, ActionToken]]) -> dict:
        raise NotImplementedError

    def determinize(self, pos: Any, player: int, rng: random.Random) -> Any:
        """Resample what ``player`` cannot see; identity for complete-information games."""
        return pos

    def heuristic_returns(self, pos: Any) -> tuple[float, float]:
        """Value estimate for a search rollout cut off before the end."""
        return (0.0, 0.0)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"

    def params(self) -> dict:
        return {}


def history_split(history: Sequence[tuple[int, ActionToken]], player: int) -> tuple[list[str], list[str]]:
    own = [tok.surface for p, tok in history if p == player]
    other = [tok.surface for p, tok in history if p != player]
    return own, other
