import random

import pytest
from hypothesis import given, strategies as st

from gamearena.core import ActionToken, GameId, apply, legal_actions, new_match, observe
from gamearena.games import ALL_GAMES
from gamearena.prompts import (
    COT_VARIANTS, STYLES, IncompleteStreamError, MissingVariableError, compose, majority_vote, parse_action,
    record_validity,
)
from gamearena.prompts.golden import composed_text, fixtures, golden_text

from conftest import random_playout

FIXTURES = fixtures()


@pytest.mark.parametrize("style", STYLES)
@pytest.mark.parametrize("fixture", FIXTURES, ids=[f["name"] for f in FIXTURES])
def test_golden_prompts(fixture, style):
    assert composed_text(fixture, style) == golden_text(fixture["name"], style)


def test_every_game_has_a_fixture():
    assert {GameId.parse(f["game"]) for f in FIXTURES} == set(ALL_GAMES)


def test_auction_budget_sentence():
    bundle = compose("blind_auction", {"valuation": 7, "legal_moves": ["<0>", "<7>"]})
    assert "your budget is 7. Your bid must be strictly lower than or equal to 7" in bundle.observation


@pytest.mark.parametrize("game_id", ALL_GAMES)
def test_cot_asks_for_thought_and_action(game_id):
    view = observe(new_match(game_id, 0), 0)
    text = compose(game_id, view, "cot").reasoning
    assert "Thought:" in text and "Action:" in text


def test_missing_variable():
    with pytest.raises(MissingVariableError, match="self_moves"):
        compose("tictactoe", {})


def test_bundle_order_and_roles():
    b = compose("nim", {"piles": [1, 3, 5, 7], "legal_moves": ["<pile:1, take:1>"]}, "prompt")
    assert [m["role"] for m in b.assembled] == ["system", "user"]
    user = b.assembled[1]["content"]
    assert user.index(b.head) < user.index(b.observation) < user.index(b.reasoning)
    assert b.text().startswith("[system]\n" + b.system)


def test_compose_is_pure():
    view = observe(new_match("kuhn_poker", 4), 1)
    assert compose("kuhn_poker", view, "tot_step") == compose("kuhn_poker", view, "tot_step")


def test_cot_variants_swap_the_opening():
    base = compose("pig", observe(new_match("pig", 0), 0), "cot").reasoning
    seen = set()
    for style in COT_VARIANTS:
        text = compose("pig", observe(new_match("pig", 0), 0), style).reasoning
        assert text.endswith(base.split("\n", 1)[1])
        assert "Then, you must choose one action from legal actions to set up advantages." in text
        seen.add(text)
    assert len(seen) == len(COT_VARIANTS)


def test_unknown_style():
    with pytest.raises(ValueError):
        compose("nim", {"piles": [1, 3, 5, 7], "legal_moves": []}, "shout")


def test_short_indexed_variable():
    with pytest.raises(MissingVariableError, match=r"piles\[1\]"):
        compose("nim", {"piles": [1], "legal_moves": []})


def test_literal_brackets_survive():
    text = compose("nim", {"piles": [1, 3, 5, 7], "legal_moves": []}, "cot").reasoning
    assert "<format>" in text


def test_ipd_history_rendering():
    s = new_match("prisoners_dilemma", 0)
    s = apply(s, ("<Silent>", "<Testify>"))
    obs = compose("ipd", observe(s, 0)).observation
    assert "<Silent>" in obs and "<Testify>" in obs
    assert "None" in compose("ipd", observe(new_match("ipd", 0), 0)).observation


def test_negotiation_observations_by_stage():
    s = new_match("negotiation", 3)
    first = compose("negotiation", observe(s, 0)).observation
    s = apply(s, "<Proposal: [0, 0, 0]>")
    second = compose("negotiation", observe(s, 0)).observation
    assert first != second
    assert "<Utterance: [0, 0, 0]>" in second


# --- parsing ---------------------------------------------------------------------

def ttt_state(*moves):
    s = new_match("tictactoe", 0)
    for m in moves:
        s = apply(s, m)
    return s


def test_parse_examples():
    r = parse_action("tictactoe", "Thought: take the edge\nAction: <C1R2>", ttt_state())
    assert r.ok and r.action.parsed == 3
    nim = new_match("nim", 0)
    nim = apply(nim, "<pile:3, take:3>")
    nim = apply(nim, "<pile:1, take:1>")
    assert parse_action("nim", "I will take <pile:3, take:4>", nim).status == "illegal"
    kuhn = new_match("kuhn_poker", 0)
    assert parse_action("kuhn_poker", "Thought: I should bet.", kuhn).status == "no_action_found"


def test_parse_last_match_wins():
    s = ttt_state()
    r = parse_action("tictactoe", "Maybe <C1R1>? No.\nAction:\n<C3R3>", s)
    assert r.action.surface == "<C3R3>"
    r = parse_action("tictactoe", "Thought: <C2R2> looks best.\nAction:\n", s)
    assert r.action.surface == "<C2R2>"


def test_parse_status_kinds():
    s = ttt_state("<C1R1>")
    assert parse_action("tictactoe", "<C1R1>", s).status == "illegal"
    assert parse_action("tictactoe", "<C4R1>", s).status == "malformed"
    assert parse_action("tictactoe", "< C 2 R 2 >", s).status == "malformed"
    assert parse_action("tictactoe", "", s).status == "no_action_found"


def test_parse_keyword_case():
    kuhn = new_match("kuhn_poker", 0)
    assert parse_action("kuhn_poker", "<bet>", kuhn).action.surface == "<Bet>"
    assert parse_action("kuhn_poker", "< PASS >", kuhn).action.surface == "<Pass>"


def test_parse_simultaneous_needs_player():
    s = new_match("prisoners_dilemma", 0)
    assert parse_action("prisoners_dilemma", "<testify>", s, player=1).action.surface == "<Testify>"
    with pytest.raises(ValueError):
        parse_action("prisoners_dilemma", "<testify>", s)


@pytest.mark.parametrize("game_id", ALL_GAMES)
def test_parse_of_render_is_ok(game_id):
    rng = random.Random(str(game_id))
    checked = 0
    seed = 0
    while checked < 100:
        states = [s for s in random_playout(game_id, seed) if not s.terminal]
        seed += 1
        s = rng.choice(states)
        players = (0, 1) if s.current_player == "both" else (s.current_player,)
        for p in players:
            for tok in legal_actions(s, p):
                r = parse_action(game_id, f"Thought:\nfine.\n\nAction:\n{tok.surface}", s, p)
                assert r.ok and r.action == tok
        checked += 1


@given(st.integers(0, 1000), st.lists(st.sampled_from(
    ["<C1R1>", "<C2R2>", "<C3R3>", "<C4R4>", "text", "<C1R3>", "<>", "<C2R1 >"]), max_size=6))
def test_parse_never_ok_when_illegal(seed, pieces):
    s = list(random_playout("tictactoe", seed, max_plies=seed % 8))[-1]
    if s.terminal:
        return
    r = parse_action("tictactoe", " ".join(pieces), s)
    legal = legal_actions(s)
    assert r.ok == (r.action is not None and r.action in legal)


# --- voting and completion rate ------------------------------------------------------

A, B, C = (ActionToken(f"<{x}>", x) for x in "ABC")


def test_majority_vote():
    assert majority_vote([A, A, B, A, C]) == A
    assert majority_vote([A, A, B, B, C]) == A
    assert majority_vote([B, A, A, B]) == B
    assert majority_vote([A]) == A
    with pytest.raises(ValueError):
        majority_vote([])


def test_record_validity():
    assert record_validity([True] * 50) == 1.0
    flags = [True] * 20 + [False] * 5 + [True] * 30
    assert record_validity(flags) == pytest.approx(50 / 55)
    with pytest.raises(IncompleteStreamError) as err:
        record_validity([True] * 10 + [False] * 3)
    assert err.value.attempts == 13
