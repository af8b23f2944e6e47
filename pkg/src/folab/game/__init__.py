"""Ehrenfeucht game engine: exact solver, equivalence certificates,
scripted Duplicator strategies, and formula-battery crosschecks."""

from .state import GameState, Winner, partial_isomorphism_ok
from .solver import solve, reply_values
from .crosscheck import crosscheck_ehrenfeucht, generate_battery
from .equivalence import (check_regular_equivalence, check_kr_equivalence,
                          build_extension_chain, ChainResult)
from .strategy import StrategyContext, duplicator_move
from .membership import check_S_membership, MembershipReport

__all__ = [
    "GameState", "Winner", "partial_isomorphism_ok", "solve", "reply_values",
    "crosscheck_ehrenfeucht", "generate_battery", "check_regular_equivalence",
    "check_kr_equivalence", "build_extension_chain", "ChainResult",
    "StrategyContext", "duplicator_move", "check_S_membership", "MembershipReport",
]
