"""Seeded benchmark harness: instance generators, runner, table output.

Instances are drawn from a seeded PRNG (the stdlib Mersenne Twister),
so a (problem, size, queries, seed) quadruple pins down the exact
instance set.  Queries run sequentially, each against a fresh program
and state with a per-query wall-clock limit; timed-out queries count
against the completion rate and are excluded from the mean, which is
how the reference results present a dash for fully timed-out arms.
"""

from __future__ import annotations

import csv
import io
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .engine import LimitExceeded, Mode, SolverConfig, run
from .programs import (
    Edge,
    LevenshteinGoal,
    gcd_program,
    levenshtein_program,
    shortest_path_program,
)
from .state import new_state

PROBLEMS = ("gcd", "shp", "lev")


def gen_gcd(n: int, rng: random.Random) -> list:
    """A gcd query: a random x in [2, 1000] paired with 1000*n."""
    return [rng.randint(2, 1000), 1000 * n]


def gen_shp(n: int, rng: random.Random) -> list:
    """A graph with 2*ceil(sqrt(n)) nodes and n random weighted edges.

    Endpoints are drawn uniformly without self-loops; parallel edges
    may occur.  Weights are uniform in [1, 100].
    """
    nodes = [f"n{i}" for i in range(2 * math.ceil(math.sqrt(n)))]
    edges = []
    for _ in range(n):
        source, target = rng.sample(nodes, 2)
        edges.append(Edge(source, target, rng.randint(1, 100)))
    return edges


def gen_lev(n: int, rng: random.Random) -> list:
    """An edit-distance goal between a length-15 sequence and a mutation.

    The second sequence applies k mutations to the first, k uniform in
    [0, ceil(15*n/100)], each a substitution, an insert-then-truncate,
    or a delete-then-pad, so the length stays 15.  Symbols come from an
    8-letter integer alphabet.  The result variable "result" is
    disjoint from the "var..." names the solver generates.
    """
    base = [rng.randrange(8) for _ in range(15)]
    mutated = list(base)
    for _ in range(rng.randint(0, math.ceil(15 * n / 100))):
        op = rng.randrange(3)
        if op == 0:
            mutated[rng.randrange(15)] = rng.randrange(8)
        elif op == 1:
            mutated.insert(rng.randrange(16), rng.randrange(8))
            del mutated[-1]
        else:
            del mutated[rng.randrange(15)]
            mutated.append(rng.randrange(8))
    return [LevenshteinGoal(tuple(base), tuple(mutated), "result")]


_GENERATORS: dict[str, Callable[[int, random.Random], list]] = {
    "gcd": gen_gcd,
    "shp": gen_shp,
    "lev": gen_lev,
}

_PROGRAMS: dict[str, Callable[[], list]] = {
    "gcd": gcd_program,
    "shp": shortest_path_program,
    "lev": levenshtein_program,
}


def make_instances(problem: str, size: int, queries: int, seed: int) -> list[list]:
    """The deterministic instance set for a spec; same seed, same queries."""
    rng = random.Random(seed)
    gen = _GENERATORS[problem]
    return [gen(size, rng) for _ in range(queries)]


@dataclass(frozen=True)
class BenchSpec:
    """One benchmark arm: a problem/size/config triple plus sampling knobs."""

    problem: str
    size: int
    mode: Mode
    queries: int = 100
    time_limit: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.problem not in _GENERATORS:
            raise ValueError(f"unknown problem {self.problem!r}")
        if self.size < 1:
            raise ValueError("size must be >= 1")
        if self.queries < 1:
            raise ValueError("queries must be >= 1")


@dataclass
class BenchResult:
    """Aggregates for one arm; per_query_ms holds None for timeouts."""

    problem: str
    size: int
    mode: Mode
    mean_ms: float | None
    completion_rate: float
    per_query_ms: list = field(default_factory=list)


def run_bench(spec: BenchSpec) -> BenchResult:
    """Run one arm sequentially and aggregate timings.

    Each query gets a fresh program instance (the lev solver carries a
    per-run symbol generator) and its own state.  A query that exceeds
    the time limit (or the safety step limit) is recorded as None.
    """
    instances = make_instances(spec.problem, spec.size, spec.queries, spec.seed)
    make_program = _PROGRAMS[spec.problem]
    config = SolverConfig(mode=spec.mode, time_limit=spec.time_limit)
    per_query: list = []
    for query in instances:
        program = make_program()
        state = new_state(query)
        t0 = time.perf_counter()
        try:
            run(program, state, config)
        except LimitExceeded:
            per_query.append(None)
        else:
            per_query.append((time.perf_counter() - t0) * 1000.0)
    completed = [t for t in per_query if t is not None]
    mean_ms = sum(completed) / len(completed) if completed else None
    return BenchResult(
        spec.problem,
        spec.size,
        spec.mode,
        mean_ms,
        len(completed) / len(per_query),
        per_query,
    )


MODE_ORDER = (Mode.EAGER, Mode.LAZY, Mode.LAZY_INDEXED)


def emit_table(results: Iterable[BenchResult], format: str = "csv") -> str:
    """Render results as CSV (one row per arm) or a grouped markdown table.

    CSV keeps full float precision so parsing the text back reproduces
    the numbers exactly; an absent mean (nothing completed) is an empty
    CSV field and a dash in markdown.
    """
    results = list(results)
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["problem", "size", "config", "mean_ms", "completion_rate"])
        for r in results:
            writer.writerow(
                [
                    r.problem,
                    r.size,
                    r.mode.value,
                    "" if r.mean_ms is None else repr(r.mean_ms),
                    repr(r.completion_rate),
                ]
            )
        return buf.getvalue()
    if format == "markdown":
        cells: dict[tuple[str, int], dict[Mode, BenchResult]] = {}
        for r in results:
            cells.setdefault((r.problem, r.size), {})[r.mode] = r
        header = ["problem", "size"]
        for mode in MODE_ORDER:
            header += [f"{mode.value} t (ms)", f"{mode.value} c"]
        lines = [
            "| " + " | ".join(header) + " |",
            "|" + "|".join(" --- " for _ in header) + "|",
        ]
        for (problem, size), by_mode in cells.items():
            row = [problem, str(size)]
            for mode in MODE_ORDER:
                r = by_mode.get(mode)
                if r is None:
                    row += ["", ""]
                else:
                    row += [
                        "-" if r.mean_ms is None else f"{r.mean_ms:.2f}",
                        f"{r.completion_rate:.2f}",
                    ]
            lines.append("| " + " | ".join(row) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {format!r}")
