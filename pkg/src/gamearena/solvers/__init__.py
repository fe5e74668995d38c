"""Search-based and scripted agents, plus the exact-value oracle."""

from gamearena.solvers.agents import MctsAgent, RandomAgent, ScriptedPolicy, TitForTatAgent
from gamearena.solvers.mcts import MctsConfig, mcts_act, root_visits
from gamearena.solvers.oracle import OracleBudgetError, OracleResult, oracle_solve
from gamearena.solvers.simple import random_act, tit_for_tat_act

__all__ = [
    "MctsAgent", "MctsConfig", "OracleBudgetError", "OracleResult", "RandomAgent",
    "ScriptedPolicy", "TitForTatAgent", "mcts_act", "oracle_solve", "random_act",
    "root_visits", "tit_for_tat_act",
]
