"""UCT Monte-Carlo tree search over the rules layer.

The tree is open-loop: nodes are keyed by action sequences and every simulation
replays its own copy of the position, so chance (dice, tie coins) is redrawn per
simulation from a fresh seed. Hidden information is handled by determinization:
the budget is split over several trees, each searched on one sampled completion
of what the searching player cannot see. Simultaneous turns use decoupled UCT,
each player selecting on its own marginal statistics.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass

from gamearena.core import ActionToken, GameState, TerminalStateError
from gamearena.games.base import Game


@dataclass(frozen=True)
class MctsConfig:
    num_simulations: int = 1000
    exploration_constant: float = math.sqrt(2)
    max_rollout_depth: int = 200
    determinizations: int = 20

    def __post_init__(self):
        if self.num_simulations < 1:
            raise ValueError("num_simulations must be >= 1")
        if not self.exploration_constant > 0:
            raise ValueError("exploration_constant must be > 0")
        if self.determinizations < 1:
            raise ValueError("determinizations must be >= 1")


class _Node:
    __slots__ = ("n", "stats", "children")

    def __init__(self):
        self.n = 0
        # sequential: {move: [visits, sum_r0, sum_r1]}
        # simultaneous: ({move0: [...]}, {move1: [...]})
        self.stats = None
        self.children = {}


def _select(stats, legal, mover, log_n, c, lo, span, rng):
    untried = [m for m in legal if m not in stats]
    if untried:
        m = untried[rng.randrange(len(untried))] if len(untried) > 1 else untried[0]
        stats[m] = [0, 0.0, 0.0]
        return m, True
    best = None
    best_score = -math.inf
    idx = mover + 1
    for m in legal:
        st = stats[m]
        n = st[0]
        score = ((st[idx] / n) - lo) / span + c * math.sqrt(log_n / n)
        if score > best_score:
            best_score = score
            best = m
    return best, False


def _rollout(game: Game, pos, seed: int, rng: random.Random, max_depth: int):
    depth = 0
    is_terminal, to_move, legal, step = game.is_terminal, game.to_move, game.legal, game.step
    while not is_terminal(pos):
        if depth >= max_depth:
            return game.heuristic_returns(pos)
        mover = to_move(pos)
        if mover >= 0:
            moves = legal(pos, mover)
            move = moves[rng.randrange(len(moves))]
        else:
            m0 = legal(pos, 0)
            m1 = legal(pos, 1)
            move = (m0[rng.randrange(len(m0))], m1[rng.randrange(len(m1))])
        pos = step(pos, move, seed)
        depth += 1
    return game.returns(pos)


def _uct(game: Game, root_pos, player: int, simulations: int, cfg: MctsConfig, rng: random.Random) -> Counter:
    root = _Node()
    c = cfg.exploration_constant
    lo, hi = game.reward_range
    span = (hi - lo) or 1.0
    for _ in range(simulations):
        seed = rng.getrandbits(63)
        pos = root_pos
        node = root
        path = []
        while True:
            if game.is_terminal(pos):
                ret = game.returns(pos)
                break
            mover = game.to_move(pos)
            log_n = math.log(node.n) if node.n else 0.0
            if mover >= 0:
                if node.stats is None:
                    node.stats = {}
                key, fresh = _select(node.stats, game.legal(pos, mover), mover, log_n, c, lo, span, rng)
            else:
                if node.stats is None:
                    node.stats = ({}, {})
                m0, f0 = _select(node.stats[0], game.legal(pos, 0), 0, log_n, c, lo, span, rng)
                m1, f1 = _select(node.stats[1], game.legal(pos, 1), 1, log_n, c, lo, span, rng)
                key, fresh = (m0, m1), f0 or f1
            path.append((node, key, mover))
            pos = game.step(pos, key, seed)
            child = node.children.get(key)
            if child is None:
                child = node.children[key] = _Node()
            node = child
            if fresh:
                ret = _rollout(game, pos, seed, rng, cfg.max_rollout_depth)
                break
        r0, r1 = ret
        for nd, key, mover in path:
            nd.n += 1
            if mover >= 0:
                st = nd.stats[key]
                st[0] += 1
                st[1] += r0
                st[2] += r1
            else:
                for p in (0, 1):
                    st = nd.stats[p][key[p]]
                    st[0] += 1
                    st[1] += r0
                    st[2] += r1
    if root.stats is None:
        return Counter()
    stats = root.stats if isinstance(root.stats, dict) else root.stats[player]
    return Counter({m: st[0] for m, st in stats.items()})


def root_visits(game: Game, pos, player: int, config: MctsConfig, seed: int) -> Counter:
    """Aggregate root visit counts per move; they sum to ``config.num_simulations``."""
    rng = random.Random(seed)
    total = config.num_simulations
    trees = min(config.determinizations, total) if game.hidden_information else 1
    share, extra = divmod(total, trees)
    visits: Counter = Counter()
    for t in range(trees):
        sims = share + (1 if t < extra else 0)
        base = game.determinize(pos, player, rng) if game.hidden_information else pos
        visits.update(_uct(game, base, player, sims, config, rng))
    return visits


def mcts_act(state: GameState, player: int, config: MctsConfig | None = None, seed: int = 0) -> ActionToken:
    """Most-visited root action; ties go to the lowest surface string."""
    if state.terminal:
        raise TerminalStateError("mcts_act on a terminal state")
    config = config or MctsConfig()
    game = state.game
    visits = root_visits(game, state.position, player, config, seed)
    legal = game.legal(state.position, player)
    best = min(legal, key=lambda m: (-visits.get(m, 0), game.render(m)))
    return game.token(best)
