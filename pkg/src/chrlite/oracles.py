"""Independent reference implementations for differential testing.

Everything here recomputes expected results from first principles:
Euclid for gcd, Floyd-Warshall for shortest paths, the textbook DP for
edit distance, and a permutation-based brute-force matcher.  None of it
reuses engine machinery (graph and matcher inputs are read through
plain attribute/callable access), so agreement with the engine is
evidence rather than tautology.

differential_run is the harness on top: it executes one query under
all three solver configurations and reports whether the final stores
agree as multisets.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence


def euclid_gcd(values: Sequence[int]) -> int:
    """Fold of the Euclidean algorithm; requires positive inputs."""
    if not values:
        raise ValueError("euclid_gcd needs at least one value")
    g = 0
    for v in values:
        if v <= 0:
            raise ValueError(f"euclid_gcd requires positive integers, got {v}")
        g = math.gcd(g, v)
    return g


def floyd_warshall(edges: Iterable[Any]) -> dict[tuple[Any, Any], int]:
    """All-pairs minimum walk weights over objects with source/target/weight.

    Distances cover walks of at least one edge, so a pair (u, u) gets an
    entry exactly when u lies on a cycle; that matches a path store
    built by edge-prepending, which derives cyclic paths too.  Parallel
    edges collapse to the lightest.  Missing keys mean unreachable.
    """
    edges = list(edges)
    nodes = sorted({e.source for e in edges} | {e.target for e in edges})
    dist: dict[tuple[Any, Any], int] = {}
    for e in edges:
        key = (e.source, e.target)
        if key not in dist or e.weight < dist[key]:
            dist[key] = e.weight
    for k in nodes:
        for i in nodes:
            ik = dist.get((i, k))
            if ik is None:
                continue
            for j in nodes:
                kj = dist.get((k, j))
                if kj is None:
                    continue
                through = ik + kj
                cur = dist.get((i, j))
                if cur is None or through < cur:
                    dist[(i, j)] = through
    return dist


def lev_dp(a: Sequence, b: Sequence) -> int:
    """Standard edit-distance DP with a rolling row."""
    n = len(b)
    prev = list(range(n + 1))
    for i, x in enumerate(a, start=1):
        cur = [i] + [0] * n
        for j, y in enumerate(b, start=1):
            cost = 0 if x == y else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev = cur
    return prev[n]


def naive_all_matchings(
    head: Sequence[Callable],
    guard: Callable[..., bool],
    active_id: int,
    active_value: Any,
    state,
) -> set[tuple]:
    """Brute-force matcher: every injective assignment, no shortcuts.

    Tries the active value at each head position and every permutation
    of older store ids on the remaining positions, keeping those that
    pass all patterns and the guard.  Exponential and proud of it; only
    meant for stores of desk size.  Returns plain (active_pos, ids,
    values) triples, which compare equal to the engine's Matching
    tuples.
    """
    n = len(head)
    partners = [i for i in state.store if i < active_id]
    found: set[tuple] = set()
    for active_pos in range(n):
        if not head[active_pos](active_value):
            continue
        rest = [p for p in range(n) if p != active_pos]
        for perm in itertools.permutations(partners, n - 1):
            ids: list = [None] * n
            values: list = [None] * n
            ids[active_pos] = active_id
            values[active_pos] = active_value
            ok = True
            for pos, i in zip(rest, perm):
                v = state.store[i]
                if not head[pos](v):
                    ok = False
                    break
                ids[pos] = i
                values[pos] = v
            if ok and guard(*values):
                found.add((active_pos, tuple(ids), tuple(values)))
    return found


@dataclass
class ConfigRun:
    """Outcome of one query under one solver configuration."""

    mode: Any
    values: Counter
    steps: int
    wall_ms: float


@dataclass
class DifferentialReport:
    """Cross-configuration comparison of one query's final stores."""

    program_id: str
    query: list
    runs: "dict[Any, ConfigRun]" = field(default_factory=dict)
    agree: bool = True
    diff: str | None = None


def differential_run(program_id: str, query: Iterable, step_limit: int = 10_000_000) -> DifferentialReport:
    """Run one query under EAGER, LAZY, and LAZY_INDEXED and compare.

    The report carries per-config final store multisets, step counts
    and wall time; agree is False (with a value-level diff) if any two
    configs disagree on the final multiset.
    """
    # Imported here so the reference oracles above stay importable
    # without pulling in the engine.
    from .engine import Mode, SolverConfig, new_state, run
    from .programs import gcd_program, levenshtein_program, shortest_path_program

    factories = {
        "gcd": gcd_program,
        "shp": shortest_path_program,
        "lev": levenshtein_program,
    }
    if program_id not in factories:
        raise ValueError(f"unknown program id {program_id!r}")
    query = list(query)
    report = DifferentialReport(program_id, query)
    for mode in (Mode.EAGER, Mode.LAZY, Mode.LAZY_INDEXED):
        program = factories[program_id]()  # fresh per config: lev owns a symbol generator
        state = new_state(query)
        t0 = time.perf_counter()
        run(program, state, SolverConfig(mode=mode, step_limit=step_limit))
        wall_ms = (time.perf_counter() - t0) * 1000.0
        report.runs[mode] = ConfigRun(mode, Counter(state.store.values()), state.steps, wall_ms)
    baseline_mode, *other_modes = report.runs
    baseline = report.runs[baseline_mode]
    diffs = []
    for mode in other_modes:
        other = report.runs[mode]
        if other.values != baseline.values:
            missing = baseline.values - other.values
            extra = other.values - baseline.values
            diffs.append(
                f"{mode}: missing vs {baseline_mode}: {dict(missing)!r}; "
                f"extra: {dict(extra)!r}"
            )
    if diffs:
        report.agree = False
        report.diff = "\n".join(diffs)
    return report
