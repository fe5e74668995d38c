"""Observation -> prompt composition and generation -> action parsing."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping, Sequence

from gamearena.core import ActionToken, GameError, GameId, GameState, ObservationView
from gamearena.games.base import ActionSyntaxError, render_moves

STYLES = ("prompt", "cot", "sc_cot", "tot_step", "tot_vote")
COT_VARIANTS = tuple(f"cot_v{i}" for i in range(5))

_STYLE_FILES = {"prompt": "prompt", "cot": "cot", "sc_cot": "cot", "tot_step": "tot_step", "tot_vote": "tot_vote"}
_COT_OPENING = ("First think about your current situation, then you must choose one action "
                "from legal actions to set up advantages.")

# Placeholder names each observation template may fill; anything else in angle
# brackets (<format>, <Bet>, ...) is literal text.
PLACEHOLDERS: dict[str, tuple[str, ...]] = {
    "tictactoe": ("opponent_moves", "self_moves", "legal_moves"),
    "connect4": ("opponent_moves", "self_moves", "legal_moves"),
    "breakthrough": ("board_preview", "opponent_moves", "self_moves", "legal_moves"),
    "kuhn_poker": ("card", "self_moves", "opponent_moves", "legal_moves"),
    "liars_dice": ("face_value", "opponent_last_action", "legal_moves"),
    "blind_auction": ("valuation", "legal_moves"),
    "nim": ("piles", "legal_moves"),
    "pig": ("agent_current_score", "opponent_current_score", "turn_total_score", "legal_moves"),
    "prisoners_dilemma": ("history", "legal_moves"),
    "prisoners_dilemma_round": ("round", "move", "opponent_move"),
    "negotiation_proposal": ("item_pool", "self_value_vector", "opponent_proposal_take",
                             "opponent_utterance_take", "legal_moves"),
    "negotiation_utterance": ("item_pool", "self_value_vector", "agent_proposal_take",
                              "opponent_utterance_take", "legal_moves"),
}

_SLOT = re.compile(r"<([a-z_]+)(?:\[(\d+)\])?>")


class MissingVariableError(GameError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else "missing template variable"


@lru_cache(maxsize=None)
def load_asset(relpath: str) -> str:
    text = resources.files("gamearena.prompts").joinpath("assets", relpath).read_text(encoding="utf-8")
    return text[:-1] if text.endswith("\n") else text


def render_value(value) -> str:
    if value is None:
        return "None"
    if isinstance(value, (list, tuple)):
        return render_moves([str(v) for v in value])
    return str(value)


def fill(template: str, variables: Mapping, names: Iterable[str]) -> str:
    """Substitute ``<name>`` and ``<name[i]>`` for the declared names only."""
    names = set(names)
    missing = sorted(n for n in names if n not in variables and re.search(f"<{n}[>\\[]", template))
    if missing:
        raise MissingVariableError(f"missing template variables: {', '.join(missing)}")

    def sub(m):
        name, idx = m.group(1), m.group(2)
        if name not in names:
            return m.group(0)
        value = variables[name]
        if idx is None:
            return render_value(value)
        try:
            return render_value(value[int(idx)])
        except (IndexError, TypeError):
            raise MissingVariableError(f"missing template variables: {name}[{idx}]") from None

    return _SLOT.sub(sub, template)


@dataclass(frozen=True)
class PromptBundle:
    system: str
    head: str
    observation: str
    reasoning: str

    @property
    def user(self) -> str:
        return f"{self.head}\n\n{self.observation}\n\n{self.reasoning}"

    @property
    def assembled(self) -> list[dict[str, str]]:
        return [{"role": "system", "content": self.system}, {"role": "user", "content": self.user}]

    def text(self) -> str:
        """Flat rendering used for logs and golden files."""
        return f"[system]\n{self.system}\n[user]\n{self.user}\n"


def _observation_key(gid: GameId, variables: Mapping) -> str:
    if gid is GameId.NEGOTIATION:
        stage = variables.get("turn_type")
        if stage not in ("proposal", "utterance"):
            raise MissingVariableError("missing template variables: turn_type")
        return f"negotiation_{stage}"
    return gid.value


def _ipd_history(variables: Mapping) -> str:
    missing = [n for n in ("self_moves", "opponent_moves") if n not in variables]
    if missing:
        raise MissingVariableError(f"missing template variables: {', '.join(missing)}")
    line = load_asset("observation/prisoners_dilemma_round.txt")
    rounds = [
        fill(line, {"round": i + 1, "move": own, "opponent_move": other}, PLACEHOLDERS["prisoners_dilemma_round"])
        for i, (own, other) in enumerate(zip(variables["self_moves"], variables["opponent_moves"]))
    ]
    return " ".join(rounds) if rounds else "None"


def reasoning_text(style: str, choices: Sequence[str] | None = None) -> str:
    if style in COT_VARIANTS:
        opening = load_asset(f"reasoning/cot_variants/{style[-1]}.txt")
        base = load_asset("reasoning/cot.txt")
        return base.replace(_COT_OPENING, f"{opening} Then, you must choose one action from legal actions "
                                          "to set up advantages.", 1)
    if style not in _STYLE_FILES:
        raise ValueError(f"unknown reasoning style {style!r}")
    text = load_asset(f"reasoning/{_STYLE_FILES[style]}.txt")
    if style == "tot_vote" and choices:
        text += "\n" + "".join(f"Choice {i}:\n{c}\n" for i, c in enumerate(choices, start=1))
    return text


def compose(game_id: GameId | str, view: ObservationView | Mapping, reasoning_style: str = "prompt",
            choices: Sequence[str] | None = None) -> PromptBundle:
    """Build the four prompt parts for one player's view.

    ``choices`` are the candidate generations listed under the vote instruction
    when ``reasoning_style`` is ``tot_vote``.
    """
    gid = GameId.parse(game_id)
    variables = dict(view.variables if isinstance(view, ObservationView) else view)
    key = _observation_key(gid, variables)
    if gid is GameId.PRISONERS_DILEMMA:
        variables["history"] = _ipd_history(variables)
    observation = fill(load_asset(f"observation/{key}.txt"), variables, PLACEHOLDERS[key])
    return PromptBundle(
        system=load_asset("system.txt"),
        head=load_asset(f"head/{gid.value}.txt"),
        observation=observation,
        reasoning=reasoning_text(reasoning_style, choices),
    )


@dataclass(frozen=True)
class ParseResult:
    status: str  # ok | no_action_found | malformed | illegal
    action: ActionToken | None
    raw: str = field(repr=False, default="")

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _acting_player(state: GameState, player: int | None) -> int:
    if player is not None:
        return player
    current = state.current_player
    if isinstance(current, int):
        return current
    raise ValueError("player must be given for simultaneous or finished states")


def parse_action(game_id: GameId | str, generation: str, state: GameState, player: int | None = None) -> ParseResult:
    """Extract the last well-formed action token and check it against the legal moves."""
    game = state.game
    if GameId.parse(game_id) is not game.game_id:
        raise GameError(f"state belongs to {game.game_id}, not {game_id}")
    text = generation or ""
    candidates = [m.group(0) for m in game.pattern.finditer(text)]
    if not candidates:
        return ParseResult("no_action_found", None, text)
    for surface in reversed(candidates):
        try:
            parsed = game.parse(surface)
        except ActionSyntaxError:
            continue
        break
    else:
        return ParseResult("malformed", None, text)
    p = _acting_player(state, player)
    legal = game.legal(state.position, p) if not state.terminal else []
    move = game.match_legal(parsed, legal)
    if move is None:
        return ParseResult("illegal", ActionToken(surface, parsed), text)
    return ParseResult("ok", game.token(move), text)


def majority_vote(actions: Sequence[ActionToken]) -> ActionToken:
    """Most frequent action; ties go to the one that appeared first."""
    if not actions:
        raise ValueError("majority_vote needs at least one action")
    counts = Counter(actions)
    top = max(counts.values())
    return next(a for a in actions if counts[a] == top)


class IncompleteStreamError(GameError):
    def __init__(self, valid: int, attempts: int, target: int):
        super().__init__(f"only {valid} of {target} valid matches in {attempts} attempts")
        self.valid, self.attempts, self.target = valid, attempts, target


def record_validity(match_outcomes: Iterable[bool], target: int = 50) -> float:
    """Completion rate ``target / N``, N being the attempts needed to collect ``target`` valid matches."""
    valid = attempts = 0
    for flag in match_outcomes:
        attempts += 1
        valid += bool(flag)
        if valid == target:
            return target / attempts
    raise IncompleteStreamError(valid, attempts, target)
