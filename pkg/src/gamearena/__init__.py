"""Tournament engine for two-player game-theoretic environments."""

from gamearena.core import (
    ActionToken,
    GameId,
    GameSpec,
    GameState,
    ObservationView,
    Outcome,
    apply,
    legal_actions,
    new_match,
    observe,
    outcome,
)
from gamearena.match import MatchRecord, run_match

__version__ = "0.1.0"

__all__ = [
    "ActionToken", "GameId", "GameSpec", "GameState", "MatchRecord", "ObservationView", "Outcome",
    "apply", "legal_actions", "new_match", "observe", "outcome", "run_match",
]
