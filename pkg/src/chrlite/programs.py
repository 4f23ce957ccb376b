"""Example solvers: gcd, all-pairs shortest paths, Levenshtein distance.

Three small rule programs exercising the engine end to end: plain
simplification rules (gcd), propagation rules with index hints over a
graph store (shortest paths), and a solver built on top of a variable
assignment sub-solver with generated symbols (Levenshtein).  They
double as the benchmark workloads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .engine import Program, compose, rule
from .matching import IndexedBy
from .state import Indexed

NodeLabel = str
VarName = str
Rhs = Union[str, int, "tuple[str | int, str | int, str | int]"]


# -- greatest common divisor -------------------------------------------


def gcd_program() -> Program:
    """Fold a query of naturals down to their gcd.

    `zero` discards zeros; `subtract` keeps the smaller of a positive
    pair and replaces the larger with the difference (Euclid by
    repeated subtraction).
    """
    return compose(
        rule("zero", [], [lambda x: x == 0], lambda _: True, lambda _: []),
        rule(
            "subtract",
            [lambda n: 0 < n],
            [lambda m: 0 < m],
            lambda n, m: n <= m,
            lambda n, m: [m - n],
        ),
    )


# -- shortest paths ----------------------------------------------------


@dataclass(frozen=True)
class Edge(Indexed):
    """A weighted directed edge; indexed by its target node.

    Indexing by target serves the transitive_paths rule: the edges that
    can extend a path are exactly those whose target equals the path's
    source.
    """

    source: NodeLabel
    target: NodeLabel
    weight: int

    def index(self):
        return self.target


@dataclass(frozen=True)
class Path(Edge):
    """A witnessed walk; nodes runs from source to target.

    nodes is a tuple (not a list) so paths stay hashable for multiset
    reporting.  Indexed by the endpoint pair, which is what the
    duplicate-clearing rule keys on.
    """

    nodes: tuple[NodeLabel, ...]

    def index(self):
        return (self.source, self.target)


def is_edge(e) -> bool:
    return isinstance(e, Edge) and not isinstance(e, Path)


def is_path(p) -> bool:
    return isinstance(p, Path)


def shortest_path_program() -> Program:
    """All-pairs shortest paths over a store of Edge values.

    primitive_paths turns each edge into a one-hop path,
    transitive_paths prepends edges to known paths, and
    clear_duplicate_paths keeps only the lightest path per endpoint
    pair.  The index hints key candidate edges by the active path's
    source and candidate paths by the endpoint pair.
    """
    return compose(
        rule(
            "clear_duplicate_paths",
            [IndexedBy(1, lambda p: (p.source, p.target), is_path)],
            [is_path],
            lambda p1, p2: p1.source == p2.source
            and p1.target == p2.target
            and p1.weight <= p2.weight,
            lambda *_: [],
        ),
        rule(
            "primitive_paths",
            [is_edge],
            [],
            lambda _: True,
            lambda e: [Path(e.source, e.target, e.weight, (e.source, e.target))],
        ),
        rule(
            "transitive_paths",
            [IndexedBy(1, lambda p: p.source, is_edge), is_path],
            [],
            lambda e, p: e.target == p.source,
            lambda e, p: [
                Path(e.source, p.target, e.weight + p.weight, (e.source,) + p.nodes)
            ],
        ),
    )


# -- variable assignments ----------------------------------------------


@dataclass(frozen=True)
class Assignment(Indexed):
    """lhs := rhs, where rhs is a name, an integer, or a 1+min triple.

    A triple rhs (v1, v2, v3) stands for the pending expression
    1 + min(v1, v2, v3); the resolve rules substitute integers into its
    slots and fully_resolved collapses it once all three are known.
    """

    lhs: VarName
    rhs: Rhs

    def index(self):
        return self.lhs


def is_assignment(a) -> bool:
    return isinstance(a, Assignment)


def assignment_solver() -> Program:
    """Resolve a store of Assignment values to ground integers.

    idem drops exact duplicates, trans substitutes through name-to-name
    chains, and the resolve/fully_resolved rules evaluate 1+min triples
    slot by slot.
    """
    return compose(
        rule(
            "idem",
            [IndexedBy(1, lambda y: y.lhs, is_assignment)],
            [is_assignment],
            lambda x, y: x == y,
            lambda x, y: [],
        ),
        rule(
            "trans",
            [IndexedBy(1, lambda y: y.rhs, is_assignment)],
            [lambda y: is_assignment(y) and isinstance(y.rhs, str)],
            lambda x, y: x.lhs == y.rhs,
            lambda x, y: [Assignment(y.lhs, x.rhs)],
        ),
        rule(
            "fully_resolved",
            [],
            [
                lambda x: is_assignment(x)
                and isinstance(x.rhs, tuple)
                and all(isinstance(v, int) for v in x.rhs)
            ],
            lambda _: True,
            lambda x: [Assignment(x.lhs, 1 + min(*x.rhs))],
        ),
        _resolve_rule(0),
        _resolve_rule(1),
        _resolve_rule(2),
    )


def _resolve_rule(slot: int) -> Program:
    """Substitute a known integer into slot `slot` of a 1+min triple."""

    def substitute(x: Assignment, y: Assignment) -> list:
        rhs = list(y.rhs)
        rhs[slot] = x.rhs
        return [Assignment(y.lhs, tuple(rhs))]

    return rule(
        f"resolve_{slot}",
        [
            IndexedBy(
                1,
                lambda y: y.rhs[slot],
                lambda x: is_assignment(x) and isinstance(x.rhs, int),
            )
        ],
        [lambda y: is_assignment(y) and isinstance(y.rhs, tuple)],
        lambda x, y: x.lhs == y.rhs[slot],
        substitute,
    )


# -- Levenshtein distance ----------------------------------------------


@dataclass(frozen=True)
class LevenshteinGoal(Indexed):
    """Request to bind result_var to the edit distance of seq_a/seq_b.

    Sequences are integer tuples.  The index key renders both
    sequences, so the memoization rule finds goals for the same
    subproblem in one lookup.
    """

    seq_a: tuple[int, ...]
    seq_b: tuple[int, ...]
    result_var: VarName

    def index(self):
        return (str(self.seq_a), str(self.seq_b))


def is_levenshtein(l) -> bool:
    return isinstance(l, LevenshteinGoal)


class SymbolGenerator:
    """Counter-backed source of fresh variable names, one per run."""

    def __init__(self):
        self.next = 0

    def gensym(self, prefix: str) -> str:
        sym = prefix + str(self.next)
        self.next += 1
        return sym


def gensym(gen: SymbolGenerator, prefix: str) -> str:
    return gen.gensym(prefix)


def levenshtein_program(gen: SymbolGenerator | None = None) -> Program:
    """Edit distance via the textbook recurrences over goal values.

    Goals decompose structurally (equations 1-4); the composed
    assignment solver grounds the generated 1+min triples, and
    memoization short-circuits repeated subproblems.  equation_4 draws
    fresh variable names from `gen`, so the program (or at least its
    generator) must not be shared across runs.
    """
    if gen is None:
        gen = SymbolGenerator()

    def equation_4_body(x: LevenshteinGoal) -> list:
        v1 = gen.gensym("var")
        v2 = gen.gensym("var")
        v3 = gen.gensym("var")
        return [
            Assignment(x.result_var, (v1, v2, v3)),
            LevenshteinGoal(x.seq_a[1:], x.seq_b, v1),
            LevenshteinGoal(x.seq_a, x.seq_b[1:], v2),
            LevenshteinGoal(x.seq_a[1:], x.seq_b[1:], v3),
        ]

    return compose(
        assignment_solver(),
        rule(
            "memoization",
            [IndexedBy(1, lambda y: y.index(), is_levenshtein)],
            [is_levenshtein],
            lambda x, y: x.seq_a == y.seq_a and x.seq_b == y.seq_b,
            lambda x, y: [Assignment(y.result_var, x.result_var)],
        ),
        rule(
            "equation_1",
            [lambda x: is_levenshtein(x) and not x.seq_b],
            [],
            lambda _: True,
            lambda x: [Assignment(x.result_var, len(x.seq_a))],
        ),
        rule(
            "equation_2",
            [lambda x: is_levenshtein(x) and not x.seq_a],
            [],
            lambda _: True,
            lambda x: [Assignment(x.result_var, len(x.seq_b))],
        ),
        rule(
            "equation_3",
            [
                lambda x: is_levenshtein(x)
                and x.seq_a
                and x.seq_b
                and x.seq_a[0] == x.seq_b[0]
            ],
            [],
            lambda _: True,
            lambda x: [LevenshteinGoal(x.seq_a[1:], x.seq_b[1:], x.result_var)],
        ),
        rule(
            "equation_4",
            [
                lambda x: is_levenshtein(x)
                and x.seq_a
                and x.seq_b
                and x.seq_a[0] != x.seq_b[0]
            ],
            [],
            lambda _: True,
            equation_4_body,
        ),
    )


def resolve_variable(values: Iterable, var: VarName):
    """Follow assignment chains from `var` to a terminal value.

    Used to read a Levenshtein result out of a final store: the result
    variable may point at another variable rather than an integer.
    Returns the terminal value (an integer when fully resolved), or
    None if the chain dangles or loops.
    """
    bindings = {}
    for v in values:
        if isinstance(v, Assignment):
            bindings.setdefault(v.lhs, v.rhs)
    seen = set()
    current: Rhs = var
    while isinstance(current, str):
        if current in seen or current not in bindings:
            return None
        seen.add(current)
        current = bindings[current]
    return current
