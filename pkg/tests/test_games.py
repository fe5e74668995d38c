import itertools
import random
import pytest
from hypothesis import given, strategies as st

from gamearena.core import IllegalActionError, apply, legal_actions, new_match, outcome
from gamearena.games import (
    BlindAuction, Breakthrough, Connect4, KuhnPoker, LiarsDice, Negotiation, Nim, Pig, TicTacToe,
)
from gamearena.games.breakthrough import BLACK, WHITE
from gamearena.games.kuhn import TERMINAL_SEQUENCES
from gamearena.games.liars_dice import NUM_BIDS, bid_index, bid_of
from gamearena.games.negotiation import AGREE, value_vectors
from gamearena.games.prisoners_dilemma import SILENT, TESTIFY, round_payoffs

from conftest import random_playout


def state_at(game_id, position, seed=0, **params):
    s = new_match(game_id, seed, **params)
    return s.__class__(s.game, position, s.rng_seed)


# --- Tic-Tac-Toe ---------------------------------------------------------------

def test_ttt_diagonal_win():
    pos = TicTacToe.from_marks(["C1R1", "C2R2"], ["C1R2"], to_move=0)
    s = apply(state_at("tictactoe", pos), "<C3R3>")
    assert s.terminal and outcome(s).winner == 0
    assert outcome(s).returns == (1.0, -1.0)


def test_ttt_occupied_cell_illegal():
    s = apply(new_match("tictactoe", 0), "<C2R2>")
    with pytest.raises(IllegalActionError):
        apply(s, "<C2R2>")


def test_ttt_surface_is_column_then_row():
    assert TicTacToe().parse("<C1R2>") == 3
    assert TicTacToe().render(3) == "<C1R2>"


@given(st.integers(0, 10_000))
def test_ttt_mark_counts_balanced(seed):
    for s in random_playout("tictactoe", seed):
        b = s.position.board
        assert 0 <= b.count(1) - b.count(2) <= 1


# --- Connect-4 -------------------------------------------------------------------

def test_c4_vertical_win():
    s = new_match("connect4", 0)
    for mine, theirs in [("<C1>", "<C2>")] * 3:
        s = apply(apply(s, mine), theirs)
    s = apply(s, "<C1>")
    assert outcome(s).winner == 0


def test_c4_full_column_illegal():
    s = new_match("connect4", 0)
    for _ in range(6):
        s = apply(s, "<C3>")
    assert "<C3>" not in [t.surface for t in legal_actions(s)]
    with pytest.raises(IllegalActionError):
        apply(s, "<C3>")


def test_c4_open_three_either_end_wins():
    # player 0 holds C3-C5 on the floor; C2 and C6 both complete four
    base = new_match("connect4", 0)
    for m in ["<C3>", "<C3>", "<C4>", "<C4>", "<C5>", "<C5>"]:
        base = apply(base, m)
    for finish in ("<C2>", "<C6>"):
        assert outcome(apply(base, finish)).winner == 0
    assert not apply(base, "<C1>").terminal


@given(st.integers(0, 10_000))
def test_c4_gravity(seed):
    for s in random_playout("connect4", seed):
        grid = Connect4.grid(s.position)
        for r in range(1, 6):
            for c in range(7):
                if grid[r][c] >= 0:
                    assert grid[r - 1][c] >= 0


# --- Breakthrough --------------------------------------------------------------------

def test_breakthrough_quiet_and_blocked_moves():
    pos = Breakthrough.from_rows({2: ".w.", 7: "b.."}, to_move=1)
    s = state_at("breakthrough", pos)
    assert "<b2->b3>" in [t.surface for t in legal_actions(s)]
    blocked = state_at("breakthrough", Breakthrough.from_rows({2: ".w.", 3: ".b."}, to_move=1))
    surfaces = [t.surface for t in legal_actions(blocked)]
    assert "<b2->b3>" not in surfaces
    with pytest.raises(IllegalActionError):
        apply(blocked, "<b2->b3>")
    assert "<b2->a3>" in surfaces


def test_breakthrough_capture_star_optional_on_input():
    s = state_at("breakthrough", Breakthrough.from_rows({2: ".w.", 3: "b.."}, to_move=1))
    from gamearena.prompts import parse_action
    assert parse_action("breakthrough", "<b2->a3>", s).action.surface == "<b2->a3*>"
    assert parse_action("breakthrough", "<b2->c3*>", s).status == "illegal"


def test_breakthrough_home_row_wins():
    s = state_at("breakthrough", Breakthrough.from_rows({7: "w..", 2: "..b"}, to_move=1))
    s = apply(s, "<a7->a8>")
    assert outcome(s).winner == 1


@given(st.integers(0, 10_000))
def test_breakthrough_monotone(seed):
    prev = None
    for s in random_playout("breakthrough", seed):
        counts = (s.position.board.count(BLACK), s.position.board.count(WHITE))
        if prev is not None:
            assert counts[0] <= prev[0] and counts[1] <= prev[1]
            mover, tok = s.move_history[-1]
            src, dest, _ = tok.parsed
            step = dest // 3 - src // 3
            assert step == (-1 if mover == 0 else 1)
        prev = counts


# --- Kuhn ----------------------------------------------------------------------

def kuhn_terminals():
    game = KuhnPoker()
    for _, deal in game.chance_deals():
        stack = [deal]
        while stack:
            pos = stack.pop()
            if game.is_terminal(pos):
                yield pos
                continue
            for m in game.legal(pos, game.to_move(pos)):
                stack.append(game.step(pos, m))


def test_kuhn_enumeration():
    terminals = list(kuhn_terminals())
    assert len(terminals) == 30
    assert {p.history for p in terminals} == set(TERMINAL_SEQUENCES)
    game = KuhnPoker()
    for pos in terminals:
        r = game.returns(pos)
        assert sum(r) == 0 and abs(r[0]) in (1, 2)
        assert pos.cards[0] != pos.cards[1]


@pytest.mark.parametrize("cards, seq, expected", [
    ((2, 1), "pp", (1, -1)),   # K beats Q
    ((0, 1), "bp", (1, -1)),   # fold
    ((0, 2), "bb", (-2, 2)),
    ((2, 0), "pbp", (-1, 1)),
    ((1, 2), "pbb", (-2, 2)),
])
def test_kuhn_returns(cards, seq, expected):
    game = KuhnPoker()
    pos = game.initial(0)._replace(cards=cards)
    for m in seq:
        pos = game.step(pos, m)
    assert game.returns(pos) == expected


def test_kuhn_no_action_after_terminal():
    game = KuhnPoker()
    pos = game.initial(0)._replace(history="pp")
    assert game.legal(pos, 0) == [] and game.legal(pos, 1) == []


# --- Liar's Dice ----------------------------------------------------------------------

def test_liars_dice_bid_order():
    bids = [(q, v) for q in (1, 2) for v in range(1, 7)]
    assert sorted(bids, key=lambda b: bid_index(*b)) == sorted(bids)
    assert [bid_of(i) for i in range(NUM_BIDS)] == sorted(bids)


def test_liars_dice_examples():
    game = LiarsDice()
    pos = game.initial(0)
    pos = game.step(pos, bid_index(1, 3))
    assert bid_index(1, 5) in game.legal(pos, 1)
    pos2 = game.step(game.initial(0), bid_index(2, 2))
    assert bid_index(1, 6) not in game.legal(pos2, 1)
    assert game.parse("<Liar>") not in game.legal(game.initial(0), 0)
    called = game.step(game.step(game.initial(0)._replace(dice=(4, 4)), bid_index(2, 4)), game.parse("<Liar>"))
    assert game.winner(called) == 0


@given(st.integers(0, 10_000))
def test_liars_dice_bid_chain_bounded(seed):
    final = list(random_playout("liars_dice", seed))[-1]
    chain = final.position.bids
    assert len(chain) <= NUM_BIDS
    assert list(chain) == sorted(set(chain))


# --- Blind auction --------------------------------------------------------------------

def test_auction_payoffs():
    game = BlindAuction()
    pos = game.initial(0)._replace(valuations=(10, 6))
    assert game.returns(game.step(pos, (7, 4))) == (3.0, 0.0)
    tie = game.step(pos, (5, 5), seed=3)
    assert game.returns(tie) in {(5.0, 0.0), (0.0, 1.0)}
    assert 11 not in game.legal(pos, 0)


def test_auction_tie_coin_is_fair():
    game = BlindAuction()
    pos = game.initial(0)._replace(valuations=(10, 10))
    wins = sum(game.step(pos, (5, 5), seed=s).winner for s in range(4000))
    assert abs(wins / 4000 - 0.5) < 0.03


def test_auction_valuations_uniform():
    counts = [0] * 11
    for s in range(11_000):
        counts[BlindAuction().initial(s).valuations[0]] += 1
    assert counts[0] == 0
    assert all(abs(c / 11_000 - 0.1) < 0.015 for c in counts[1:])


# --- Negotiation ------------------------------------------------------------------------

def test_negotiation_agreement_split():
    game = Negotiation()
    pos = Negotiation.position((1, 2, 3), ((2, 2, 2), (1, 1, 2)))
    pos = game.step(pos, ("P", 1, 0, 2))
    pos = game.step(pos, ("U", 1, 0, 2))
    pos = game.step(pos, AGREE)
    assert game.allocations(pos) == ((1, 0, 2), (0, 2, 1))
    assert game.returns(pos) == (6.0, 4.0)


def test_negotiation_illegal_moves():
    game = Negotiation()
    pos = Negotiation.position((1, 2, 3), ((2, 2, 2), (1, 1, 2)))
    assert ("P", 2, 0, 0) not in game.legal(pos, 0)
    assert AGREE not in game.legal(pos, 0)
    assert all(m[0] == "P" for m in game.legal(pos, 0))
    after = game.step(pos, ("P", 0, 0, 0))
    assert all(m[0] == "U" for m in game.legal(after, 0))


def test_negotiation_no_deal():
    game = Negotiation()
    pos = Negotiation.position((1, 2, 3), ((2, 2, 2), (1, 1, 2)))
    while not game.is_terminal(pos):
        pos = game.step(pos, ("P" if pos.stage == "proposal" else "U", 1, 2, 3))
    assert pos.turn == 10 and game.returns(pos) == (0.0, 0.0)


def test_negotiation_values_hit_total():
    for seed in range(300):
        pos = Negotiation().initial(seed)
        assert all(1 <= q <= 5 for q in pos.pool)
        for v in pos.values:
            assert sum(a * b for a, b in zip(v, pos.pool)) == 10
    assert (2, 2, 2) in value_vectors((1, 2, 2))


@given(st.integers(0, 10_000))
def test_negotiation_complement_identity(seed):
    rng = random.Random(seed)
    game = Negotiation()
    pos = game.initial(seed)
    while not game.is_terminal(pos):
        legal = game.legal(pos, game.to_move(pos))
        pos = game.step(pos, AGREE if AGREE in legal and rng.random() < 0.3 else rng.choice(legal))
    alloc = game.allocations(pos)
    if alloc is not None:
        assert tuple(a + b for a, b in zip(*alloc)) == pos.pool


# --- Nim ---------------------------------------------------------------------------------

def test_nim_misere():
    game = Nim()
    pos = game.position((0, 0, 0, 1))
    end = game.step(pos, (3, 1))
    assert game.winner(end) == 1
    assert game.parse("<pile:2, take:4>") not in game.legal(game.initial(0), 0)


@given(st.integers(0, 10_000))
def test_nim_totals_decrease(seed):
    states = list(random_playout("nim", seed))
    totals = [sum(s.position.piles) for s in states]
    assert all(a > b for a, b in zip(totals, totals[1:]))
    assert len(states) - 1 <= 16
    assert all(0 <= n <= m for s in states for n, m in zip(s.position.piles, (1, 3, 5, 7)))


# --- Pig --------------------------------------------------------------------------------

def test_pig_bust_and_bank():
    game = Pig()
    pos = game.initial(0)._replace(turn_total=12)
    busted = game.step_distribution(pos, "roll")[0][1]  # face 1
    assert busted.turn_total == 0 and busted.to_move == 1
    win = game.step(game.initial(0)._replace(scores=(95, 0), turn_total=6), "stop")
    assert game.is_terminal(win) and game.winner(win) == 0


def test_pig_mean_non_bust_roll():
    game = Pig()
    pos = game.initial(0)
    faces = []
    for i in range(10_000):
        after = game.step(pos._replace(rolls=i), "roll", seed=42)
        if after.to_move == 0:
            faces.append(after.turn_total)
    mean = sum(faces) / len(faces)
    assert abs(mean - 4) < 0.1
    assert abs(len(faces) / 10_000 - 5 / 6) < 0.02


def test_pig_scores_below_target_until_terminal():
    for seed in range(30):
        for s in random_playout("pig", seed):
            if not s.terminal:
                assert max(s.position.scores) < 100


# --- Prisoner's dilemma --------------------------------------------------------------------

def test_ipd_payoffs():
    assert round_payoffs(SILENT, SILENT) == (2, 2)
    assert round_payoffs(TESTIFY, TESTIFY) == (1, 1)
    assert round_payoffs(TESTIFY, SILENT) == (3, 0)
    assert round_payoffs(SILENT, TESTIFY) == (0, 3)
    sums = {m: sum(round_payoffs(*m)) for m in itertools.product((SILENT, TESTIFY), repeat=2)}
    assert set(sums.values()) == {2, 3, 4}
    assert max(sums, key=sums.get) == (SILENT, SILENT)


def test_ipd_five_silent_rounds():
    s = new_match("prisoners_dilemma", 0)
    for _ in range(5):
        s = apply(s, ("<Silent>", "<Silent>"))
    assert outcome(s).returns == (10.0, 10.0)
    assert len(s.position.rounds) == 5


def test_ipd_history_visible_to_both():
    from gamearena.core import observe
    s = apply(new_match("prisoners_dilemma", 0), ("<Testify>", "<Silent>"))
    assert observe(s, 0).variables["opponent_moves"] == ["<Silent>"]
    assert observe(s, 1).variables["opponent_moves"] == ["<Testify>"]
