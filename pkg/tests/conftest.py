import random

import pytest
from hypothesis import HealthCheck, settings

from gamearena.core import apply, legal_actions, new_match

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def random_playout(game_id, seed, max_plies=None, **params):
    """Yield every state of a uniformly random playout, initial state first."""
    rng = random.Random(seed)
    state = new_match(game_id, seed, **params)
    yield state
    plies = 0
    while not state.terminal and (max_plies is None or plies < max_plies):
        if state.current_player == "both":
            move = tuple(rng.choice(legal_actions(state, p)) for p in (0, 1))
        else:
            move = rng.choice(legal_actions(state))
        state = apply(state, move)
        plies += 1
        yield state


@pytest.fixture
def playout():
    return random_playout


def ttt_suite():
    """(kind, state) pairs from tests/data/ttt_suite.txt."""
    from pathlib import Path

    from gamearena.core import GameState
    from gamearena.games import TicTacToe

    out = []
    for line in (Path(__file__).parent / "data" / "ttt_suite.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        kind, board = line.split()
        rows = board.split("/")
        cells = {m: [f"C{c + 1}R{r + 1}" for r in range(3) for c in range(3) if rows[r][c] == m]
                 for m in "XO"}
        out.append((kind, GameState(TicTacToe(), TicTacToe.from_marks(cells["X"], cells["O"]), 0)))
    return out


#: criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
