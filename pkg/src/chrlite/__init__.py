"""chrlite: an embedded rule engine over multisets of plain values.

Rules are built from host-language functions (patterns, guard, body),
composed by concatenation, and executed by an activation-stack driver
with lazy iterator matching and optional store indexing.
"""

from .engine import (
    DEFAULT_CONFIG,
    LimitExceeded,
    Mode,
    Program,
    RuleProgram,
    SolverConfig,
    compose,
    rule,
    run,
    run_query,
    step,
)
from .matching import IndexedBy, Matching, MatchStream, match_head
from .programs import (
    Assignment,
    Edge,
    LevenshteinGoal,
    Path,
    SymbolGenerator,
    assignment_solver,
    gcd_program,
    gensym,
    levenshtein_program,
    resolve_variable,
    shortest_path_program,
)
from .state import ABSENT, ChrError, Indexed, State, new_state

__all__ = [
    "ABSENT",
    "Assignment",
    "ChrError",
    "DEFAULT_CONFIG",
    "Edge",
    "Indexed",
    "IndexedBy",
    "LevenshteinGoal",
    "LimitExceeded",
    "MatchStream",
    "Matching",
    "Mode",
    "Path",
    "Program",
    "RuleProgram",
    "SolverConfig",
    "State",
    "SymbolGenerator",
    "assignment_solver",
    "compose",
    "gcd_program",
    "gensym",
    "levenshtein_program",
    "match_head",
    "new_state",
    "resolve_variable",
    "rule",
    "run",
    "run_query",
    "shortest_path_program",
    "step",
]

__version__ = "0.1.0"
