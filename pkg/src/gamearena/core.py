"""Uniform game abstraction: states, actions, observations, outcomes.

Every game in :mod:`gamearena.games` implements the :class:`~gamearena.games.base.Game`
rules interface over plain immutable positions. This module wraps those positions
in :class:`GameState` values and exposes the engine-level operations used by the
match runner, the solvers and the prompt adapter.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Mapping, Sequence

if TYPE_CHECKING:
    from gamearena.games.base import Game

BOTH = "both"
CHANCE = "chance"


class GameError(Exception):
    """Base class for rule violations and engine misuse."""


class UnknownGameError(GameError, KeyError):
    pass


class IllegalActionError(GameError):
    pass


class TerminalStateError(GameError):
    pass


class ArityError(GameError):
    """Joint action given to a sequential game or a single action to a simultaneous one."""


class GameId(str, enum.Enum):
    TIC_TAC_TOE = "tictactoe"
    CONNECT4 = "connect4"
    BREAKTHROUGH = "breakthrough"
    KUHN_POKER = "kuhn_poker"
    LIARS_DICE = "liars_dice"
    BLIND_AUCTION = "blind_auction"
    NEGOTIATION = "negotiation"
    NIM = "nim"
    PIG = "pig"
    PRISONERS_DILEMMA = "prisoners_dilemma"

    @classmethod
    def parse(cls, value: "str | GameId") -> "GameId":
        if isinstance(value, GameId):
            return value
        key = str(value).strip().lower().replace("-", "_").replace(" ", "_")
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise UnknownGameError(f"unknown game {value!r}") from None

    def __str__(self) -> str:
        return self.value


_ALIASES = {
    "tic_tac_toe": "tictactoe",
    "ttt": "tictactoe",
    "connect_4": "connect4",
    "connect_four": "connect4",
    "kuhn": "kuhn_poker",
    "liarsdice": "liars_dice",
    "liar's_dice": "liars_dice",
    "auction": "blind_auction",
    "first_price_auction": "blind_auction",
    "ipd": "prisoners_dilemma",
    "iterated_prisoners_dilemma": "prisoners_dilemma",
}


@dataclass(frozen=True)
class GameSpec:
    game_id: GameId
    turn_mode: str  # "sequential" | "simultaneous"
    zero_sum: bool
    has_chance: bool
    first_player_advantage: bool
    complete_information: bool
    num_players: int = 2

    @property
    def simultaneous(self) -> bool:
        return self.turn_mode == "simultaneous"


@dataclass(frozen=True)
class ActionToken:
    surface: str
    parsed: Any = field(compare=True)

    def __str__(self) -> str:
        return self.surface


@dataclass(frozen=True)
class ObservationView:
    player: int
    variables: Mapping[str, Any]


@dataclass(frozen=True)
class Outcome:
    returns: tuple[float, float]
    winner: int | None
    draw: bool

    def to_json(self) -> dict:
        return {"returns": list(self.returns), "winner": self.winner, "draw": self.draw}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Outcome":
        return cls(tuple(data["returns"]), data["winner"], bool(data["draw"]))


@dataclass(frozen=True)
class GameState:
    """One position of one match, plus the move log that led to it.

    States are values: :func:`apply` returns a new state and never mutates.
    """

    game: "Game"
    position: Any
    rng_seed: int
    move_history: tuple[tuple[int, ActionToken], ...] = ()

    @property
    def spec(self) -> GameSpec:
        return self.game.spec

    @property
    def terminal(self) -> bool:
        return self.game.is_terminal(self.position)

    @property
    def current_player(self) -> int | str | None:
        if self.terminal:
            return None
        mover = self.game.to_move(self.position)
        return BOTH if mover < 0 else mover


# -- chance ---------------------------------------------------------------

def chance_draw(seed: int, site: str, index: int, n: int) -> int:
    """Uniform integer in ``[0, n)`` from a named substream of ``seed``.

    Each chance site reads its own stream by name and counter, so draws at one
    site never shift draws at another.
    """
    digest = hashlib.blake2b(f"{seed}:{site}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") % n


def derive_seed(*parts: Any) -> int:
    """Stable 64-bit seed from arbitrary printable parts."""
    text = "\x1f".join(str(p) for p in parts)
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


# -- engine operations ----------------------------------------------------

def new_match(game_id: "GameId | str", seed: int, **params: Any) -> GameState:
    from gamearena.games import get_game

    game = get_game(game_id, **params)
    return GameState(game, game.initial(seed), seed & 0xFFFFFFFFFFFFFFFF)


def legal_actions(state: GameState, player: int | None = None) -> list[ActionToken]:
    if state.terminal:
        raise TerminalStateError("no legal actions in a terminal state")
    game = state.game
    mover = game.to_move(state.position)
    if player is None:
        if mover < 0:
            raise ArityError("simultaneous game: specify which player's actions")
        player = mover
    elif mover >= 0 and player != mover:
        return []
    return [ActionToken(game.render(m), m) for m in game.legal(state.position, player)]


def _check(game: "Game", pos: Any, player: int, action: ActionToken | str) -> Any:
    parsed = game.parse(action) if isinstance(action, str) else action.parsed
    if parsed not in game.legal(pos, player):
        surface = action if isinstance(action, str) else action.surface
        raise IllegalActionError(f"{surface} is not legal for player {player}")
    return parsed


def apply(state: GameState, actions: "ActionToken | str | Sequence[ActionToken | str]") -> GameState:
    if state.terminal:
        raise TerminalStateError("cannot apply an action to a terminal state")
    game = state.game
    pos = state.position
    mover = game.to_move(pos)
    joint = isinstance(actions, (tuple, list))
    if mover < 0:
        if not joint or len(actions) != 2:
            raise ArityError("simultaneous game requires a joint pair of actions")
        moves = tuple(_check(game, pos, p, a) for p, a in enumerate(actions))
        tokens = tuple(ActionToken(game.render(m), m) for m in moves)
        new_pos = game.step(pos, moves, state.rng_seed)
        history = state.move_history + ((0, tokens[0]), (1, tokens[1]))
    else:
        if joint:
            raise ArityError("sequential game takes a single action")
        move = _check(game, pos, mover, actions)
        new_pos = game.step(pos, move, state.rng_seed)
        history = state.move_history + ((mover, ActionToken(game.render(move), move)),)
    return GameState(game, new_pos, state.rng_seed, history)


def observe(state: GameState, player: int) -> ObservationView:
    variables = dict(state.game.observe(state.position, player, state.move_history))
    if state.terminal:
        variables["legal_moves"] = []
    else:
        mover = state.game.to_move(state.position)
        moves = state.game.legal(state.position, player) if mover in (player, -1) else []
        variables["legal_moves"] = [state.game.render(m) for m in moves]
    return ObservationView(player, variables)


def outcome(state: GameState) -> Outcome:
    if not state.terminal:
        raise TerminalStateError("outcome requested for a non-terminal state")
    return state.game.outcome(state.position)
