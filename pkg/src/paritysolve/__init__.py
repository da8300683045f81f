"""Recursive parity game solvers with call-count instrumentation."""
from .analysis import (BoundReport, CallStats, CallTree, Recorder, binomial_envelope, check_bounds,
                       dp_call_bound, export_call_tree, headline_bound)
from .attractor import attract, is_trap
from .game import (EVEN, ODD, GeneratorSpec, Owner, ParityGame, Region, SubgameView,
                   generate_random, max_active_priority, parse_pgsolver, validate, write_pgsolver)
from .solver import (GameTooLarge, Precision, SolveResult, is_dominion, solve_e, solve_improved,
                     solve_o, solve_oracle, solve_parys, solve_zielonka)

__all__ = [
    "BoundReport", "CallStats", "CallTree", "EVEN", "GameTooLarge", "GeneratorSpec", "ODD", "Owner",
    "ParityGame", "Precision", "Recorder", "Region", "SolveResult", "SubgameView", "attract",
    "binomial_envelope", "check_bounds", "dp_call_bound", "export_call_tree", "generate_random",
    "is_dominion", "is_trap", "max_active_priority", "headline_bound", "parse_pgsolver", "solve_e",
    "solve_improved", "solve_o", "solve_oracle", "solve_parys", "solve_zielonka", "validate",
    "write_pgsolver",
]
