"""Exact game values for the small games.

* deterministic sequential games: negamax with alpha-beta and a transposition table
* Pig: expectimax over the die, cut off at a fixed depth
* Kuhn Poker and Liar's Dice: the sequence-form linear program, solved with HiGHS
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from gamearena.core import ActionToken, GameError, GameId, GameState, TerminalStateError

_EXACT, _LOWER, _UPPER = 0, 1, 2


class OracleBudgetError(GameError):
    """The position is too large for the configured node budget."""


@dataclass(frozen=True)
class OracleResult:
    value: float
    best_action: ActionToken | None
    #: Value of each root action by surface (minimax and expectimax solves).
    action_values: dict | None = None
    #: Behaviour strategy per information set (sequence-form solves only).
    strategy: dict | None = None

    def optimal_surfaces(self, tol: float = 1e-9) -> set[str]:
        if not self.action_values:
            return {self.best_action.surface}
        return {a for a, v in self.action_values.items() if v >= self.value - tol}


class _Negamax:
    def __init__(self, game, budget):
        self.game = game
        self.budget = budget
        self.nodes = 0
        self.table: dict = {}

    def value(self, pos, alpha=-2.0, beta=2.0) -> float:
        game = self.game
        entry = self.table.get(pos)
        if entry is not None:
            v, flag = entry
            if flag == _EXACT or (flag == _LOWER and v >= beta) or (flag == _UPPER and v <= alpha):
                return v
        self.nodes += 1
        if self.nodes > self.budget:
            raise OracleBudgetError(f"more than {self.budget} nodes")
        a0 = alpha
        mover = game.to_move(pos)
        best = -2.0
        for m in game.legal(pos, mover):
            child = game.step(pos, m, 0)
            v = self._child_value(pos, child, alpha, beta)
            if v > best:
                best = v
            if best > alpha:
                alpha = best
            if alpha >= beta:
                break
        flag = _UPPER if best <= a0 else _LOWER if best >= beta else _EXACT
        self.table[pos] = (best, flag)
        return best

    def _child_value(self, pos, child, alpha, beta):
        game = self.game
        if game.is_terminal(child):
            return game.returns(child)[game.to_move(pos)]
        if game.to_move(child) == game.to_move(pos):
            return self.value(child, alpha, beta)
        return -self.value(child, -beta, -alpha)


def _solve_minimax(game, pos, budget) -> OracleResult:
    mover = game.to_move(pos)
    solver = _Negamax(game, budget)
    scored = []
    for m in game.legal(pos, mover):
        child = game.step(pos, m, 0)
        scored.append((solver._child_value(pos, child, -2.0, 2.0), m))
    value = max(v for v, _ in scored)
    best = min((m for v, m in scored if v == value), key=game.render)
    return OracleResult(value, game.token(best), {game.render(m): v for v, m in scored})


def _solve_expectimax(game, pos, depth) -> OracleResult:
    memo: dict = {}

    def win_prob(p, d, player):
        if game.is_terminal(p):
            return game.returns(p)[player]
        if d == 0:
            return game.heuristic_returns(p)[player]
        key = (p, d, player)
        if key in memo:
            return memo[key]
        mover = game.to_move(p)
        vals = [sum(pr * win_prob(q, d - 1, player) for pr, q in game.step_distribution(p, m))
                for m in game.legal(p, mover)]
        v = max(vals) if mover == player else min(vals)
        memo[key] = v
        return v

    mover = game.to_move(pos)
    scored = [(sum(pr * win_prob(q, depth - 1, mover) for pr, q in game.step_distribution(pos, m)), m)
              for m in game.legal(pos, mover)]
    value = max(v for v, _ in scored)
    best = min((m for v, m in scored if v == value), key=game.render)
    return OracleResult(value, game.token(best), {game.render(m): v for v, m in scored})


class _SequenceForm:
    """Two-player zero-sum sequence form built from a game's chance deals."""

    def __init__(self, game, budget):
        self.game = game
        self.seqs = ({(): 0}, {(): 0})
        self.infosets = ({}, {})  # infoset -> (parent sequence, [moves])
        self.payoff: dict = {}
        self.leaves = 0
        self.budget = budget
        for prob, pos in game.chance_deals():
            self._walk(pos, Fraction(prob).limit_denominator(10**6), ((), ()))

    def _walk(self, pos, prob, last):
        game = self.game
        if game.is_terminal(pos):
            self.leaves += 1
            if self.leaves > self.budget:
                raise OracleBudgetError(f"more than {self.budget} leaves")
            key = (self.seqs[0][last[0]], self.seqs[1][last[1]])
            self.payoff[key] = self.payoff.get(key, 0) + prob * Fraction(game.returns(pos)[0])
            return
        p = game.to_move(pos)
        info = game.infoset(pos, p)
        moves = game.legal(pos, p)
        if info not in self.infosets[p]:
            self.infosets[p][info] = (last[p], moves)
            for m in moves:
                self.seqs[p][(info, m)] = len(self.seqs[p])
        for m in moves:
            nxt = (info, m)
            child_last = (nxt, last[1]) if p == 0 else (last[0], nxt)
            self._walk(game.step(pos, m, 0), prob, child_last)

    def _constraints(self, p):
        seqs = self.seqs[p]
        rows, cols, vals = [0], [0], [1.0]
        for r, (info, (parent, moves)) in enumerate(self.infosets[p].items(), start=1):
            rows.append(r)
            cols.append(seqs[parent])
            vals.append(-1.0)
            for m in moves:
                rows.append(r)
                cols.append(seqs[(info, m)])
                vals.append(1.0)
        shape = (len(self.infosets[p]) + 1, len(seqs))
        return sparse.csr_matrix((vals, (rows, cols)), shape=shape)

    def solve(self):
        """Return (value for player 0, realization plan of player 0)."""
        n0, n1 = len(self.seqs[0]), len(self.seqs[1])
        keys = list(self.payoff)
        A = sparse.csr_matrix(
            ([float(self.payoff[k]) for k in keys], ([k[0] for k in keys], [k[1] for k in keys])),
            shape=(n0, n1),
        )
        E = self._constraints(0)
        F = self._constraints(1)
        nq = F.shape[0]
        # variables: x (n0, >= 0) then q (nq, free); maximise q_0
        c = np.zeros(n0 + nq)
        c[n0] = -1.0
        a_ub = sparse.hstack([-A.T, F.T]).tocsr()
        a_eq = sparse.hstack([E, sparse.csr_matrix((E.shape[0], nq))]).tocsr()
        b_eq = np.zeros(E.shape[0])
        b_eq[0] = 1.0
        bounds = [(0, None)] * n0 + [(None, None)] * nq
        res = linprog(c, A_ub=a_ub, b_ub=np.zeros(n1), A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
        if res.status != 0:
            raise GameError(f"sequence-form LP failed: {res.message}")
        return -res.fun, res.x[:n0]

    def behaviour(self, plan, p=0) -> dict:
        seqs = self.seqs[p]
        out = {}
        for info, (parent, moves) in self.infosets[p].items():
            reach = plan[seqs[parent]]
            if reach > 1e-12:
                out[info] = {m: plan[seqs[(info, m)]] / reach for m in moves}
            else:
                out[info] = {m: 1.0 / len(moves) for m in moves}
        return out


def _solve_sequence_form(game, pos, budget) -> OracleResult:
    mover = game.to_move(pos)
    if mover != 0 or any(True for _ in _history(pos)):
        raise GameError("the sequence-form oracle solves from the opening position only")
    sf = _SequenceForm(game, budget)
    value, plan = sf.solve()
    strategy = sf.behaviour(plan, 0)
    probs = strategy[game.infoset(pos, 0)]
    top = max(probs.values())
    best = min((m for m, q in probs.items() if q >= top - 1e-9), key=game.render)
    return OracleResult(value, game.token(best), strategy=strategy)


def _history(pos):
    for name in ("history", "bids"):
        if hasattr(pos, name):
            return getattr(pos, name)
    return ()


_MINIMAX = {GameId.TIC_TAC_TOE, GameId.NIM, GameId.CONNECT4, GameId.BREAKTHROUGH}
_SEQUENCE_FORM = {GameId.KUHN_POKER, GameId.LIARS_DICE}


def oracle_solve(state: GameState, *, node_budget: int = 2_000_000, depth: int = 8) -> OracleResult:
    """Value for the player to move under optimal play, and an optimal action.

    Chance games are valued in expectation: Pig by expectimax cut off after
    ``depth`` plies (scored as win probability), Kuhn Poker and Liar's Dice as
    the equilibrium value over all deals, from the opening position.
    """
    if state.terminal:
        raise TerminalStateError("oracle_solve on a terminal state")
    game, pos = state.game, state.position
    gid = game.game_id
    if gid in _MINIMAX:
        return _solve_minimax(game, pos, node_budget)
    if gid is GameId.PIG:
        return _solve_expectimax(game, pos, depth)
    if gid in _SEQUENCE_FORM:
        return _solve_sequence_form(game, pos, node_budget)
    raise GameError(f"no oracle for {gid}")
