"""Rule sets for the ten supported games."""

from __future__ import annotations

from gamearena.core import GameId, UnknownGameError
from gamearena.games.auction import BlindAuction
from gamearena.games.base import SIMULTANEOUS, ActionSyntaxError, Game
from gamearena.games.breakthrough import Breakthrough
from gamearena.games.connect4 import Connect4
from gamearena.games.kuhn import KuhnPoker
from gamearena.games.liars_dice import LiarsDice
from gamearena.games.negotiation import Negotiation
from gamearena.games.nim import Nim
from gamearena.games.pig import Pig
from gamearena.games.prisoners_dilemma import PrisonersDilemma
from gamearena.games.tictactoe import TicTacToe

GAME_CLASSES: dict[GameId, type[Game]] = {
    GameId.TIC_TAC_TOE: TicTacToe,
    GameId.CONNECT4: Connect4,
    GameId.BREAKTHROUGH: Breakthrough,
    GameId.KUHN_POKER: KuhnPoker,
    GameId.LIARS_DICE: LiarsDice,
    GameId.BLIND_AUCTION: BlindAuction,
    GameId.NEGOTIATION: Negotiation,
    GameId.NIM: Nim,
    GameId.PIG: Pig,
    GameId.PRISONERS_DILEMMA: PrisonersDilemma,
}

ALL_GAMES = tuple(GAME_CLASSES)


def get_game(game_id: GameId | str, **params) -> Game:
    gid = GameId.parse(game_id)
    try:
        cls = GAME_CLASSES[gid]
    except KeyError:
        raise UnknownGameError(f"unknown game {game_id!r}") from None
    return cls(**params)


__all__ = [
    "ALL_GAMES", "GAME_CLASSES", "SIMULTANEOUS", "ActionSyntaxError", "BlindAuction",
    "Breakthrough", "Connect4", "Game", "KuhnPoker", "LiarsDice", "Negotiation", "Nim",
    "Pig", "PrisonersDilemma", "TicTacToe", "get_game",
]
