"""Rule programs, composition, and the run loop.

A rule is compiled into a RuleProgram: a callable applied to the active
(id, value) pair and the state.  It owns the active entry's match
stream for as long as the entry sits at its rule index: an uninitialised
stream is built on first touch, one matching is consumed per
application, and exhaustion advances the entry to the next rule.
Programs are plain lists of RuleProgram, composed by concatenation, and
driven to a fixpoint by run().

Matching behaviour is configured per run: EAGER materialises the whole
matching list when a stream is initialised (the unoptimised baseline),
LAZY enumerates on demand, and LAZY_INDEXED additionally narrows
candidate scans through the store index.
"""

from __future__ import annotations

import enum
import math
import sys
import time
from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence, TypeAlias

from .matching import (
    Guard,
    IndexedBy,
    MatchStream,
    Pattern,
    assignment_source,
    compile_head,
)
from .state import ChrError, Id, State, Value, new_state

Body = Callable[..., Iterable[Value]]


class Mode(enum.Enum):
    """Matching strategy for a run."""

    EAGER = "eager"
    LAZY = "lazy"
    LAZY_INDEXED = "indexed"


@dataclass(frozen=True)
class SolverConfig:
    """Run parameters.

    step_limit / time_limit abort overlong runs with LimitExceeded; None
    disables the respective bound.  The default step limit is a safety
    net against non-terminating programs, not a tuning knob.
    """

    mode: Mode = Mode.LAZY_INDEXED
    step_limit: int | None = 10_000_000
    time_limit: float | None = None


DEFAULT_CONFIG = SolverConfig()


class LimitExceeded(ChrError):
    """A run hit its step or time limit; carries the partial state."""

    def __init__(self, reason: str, state: State, steps: int):
        super().__init__(f"{reason} limit exceeded after {steps} steps")
        self.reason = reason
        self.state = state
        self.steps = steps


class RuleProgram:
    """One compiled rule; behaves as the rule transition on (id, value, state)."""

    __slots__ = (
        "name",
        "kept_len",
        "removed_len",
        "_plan",
        "_guard",
        "_body",
        "_preds",
        "_core",
    )

    def __init__(
        self,
        name: str,
        kept: Sequence[Pattern | IndexedBy],
        removed: Sequence[Pattern | IndexedBy],
        guard: Guard,
        body: Body,
    ):
        self.name = name
        self.kept_len = len(kept)
        self.removed_len = len(removed)
        self._plan = compile_head(list(kept) + list(removed))
        self._guard = guard
        self._body = body
        self._preds = tuple(entry[0] for entry in self._plan)
        self._core = assignment_source(len(self._plan))

    def __call__(self, active_id: Id, active_value: Value, state: State) -> State:
        return self._apply(state.query[-1][0], active_id, active_value, state)

    def _apply(self, dec: list, active_id: Id, active_value: Value, state: State) -> State:
        # dec is the active entry's decoration; callers on the driver's
        # hot path pass it in to spare rereading query[-1][0].
        stream = dec[2]
        if stream is None:
            # No pattern accepting the active value means an empty stream;
            # skip straight to the next rule without building one.
            for pred in self._preds:
                if pred(active_value):
                    break
            else:
                dec[1] += 1
                return state
            mode = state.mode
            source = self._core(
                self._plan, self._guard, active_id, active_value, state,
                mode is not Mode.LAZY and mode is not Mode.EAGER,
            )
            if mode is Mode.EAGER:
                source = iter(list(source))
            stream = MatchStream(state, active_id, source)
            dec[2] = stream
        m = stream.next()
        if m is None:
            dec[1] += 1
            dec[2] = None
            return state
        if m.active_pos >= self.kept_len:
            state.query.pop()
        removed_ids = m.ids[self.kept_len:]
        if removed_ids:
            state.remove(removed_ids)
        produced = self._body(*m.values)
        if produced:
            if type(produced) is list and len(produced) == 1:
                state.query.append([None, produced[0]])
            else:
                state.push_query(*produced)
        return state

    def __repr__(self) -> str:
        return f"RuleProgram({self.name!r}, kept={self.kept_len}, removed={self.removed_len})"


# A Program is a plain list of RuleProgram, composed by concatenation.
Program: TypeAlias = "list[RuleProgram]"


def rule(
    name: str,
    kept: Sequence[Pattern | IndexedBy],
    removed: Sequence[Pattern | IndexedBy],
    guard: Guard,
    body: Body,
) -> list[RuleProgram]:
    """Compile one rule into a singleton program.

    kept patterns come before removed ones in the combined head, so a
    matching's active_pos tells removal from retention by comparing
    against len(kept).  The rule name is metadata for tracing only.
    """
    return [RuleProgram(name, kept, removed, guard, body)]


def compose(*programs: list[RuleProgram]) -> list[RuleProgram]:
    """Concatenate programs; earlier arguments get lower rule indices."""
    out: list[RuleProgram] = []
    for p in programs:
        out.extend(p)
    return out


ACTIVATE = "activate"
DROP = "drop"
APPLY = "apply"
FINAL = "final"

TraceHook = Callable[[int, str], Any]


def _transition(program: list[RuleProgram], state: State) -> str:
    """One driver transition on a non-final state; returns the event kind."""
    entry = state.query[-1]
    dec = entry[0]
    if dec is None:
        state.activate()
        return ACTIVATE
    if dec[0] not in state.store or dec[1] >= len(program):
        state.query.pop()
        return DROP
    program[dec[1]](dec[0], entry[1], state)
    return APPLY


def step(program: list[RuleProgram], state: State) -> State:
    """One driver step: activate, drop, or apply; identity on final states."""
    if state.query:
        _transition(program, state)
    return state


def run(
    program: list[RuleProgram],
    state: State,
    config: SolverConfig = DEFAULT_CONFIG,
    trace: TraceHook | None = None,
) -> State:
    """Step until the query empties; returns the final state.

    Raises LimitExceeded (carrying the partial state) when the
    configured step or time limit is hit.  The wall clock is only
    consulted every 256 steps, so very short runs never time out.
    """
    state.mode = config.mode
    step_limit = config.step_limit if config.step_limit is not None else sys.maxsize
    deadline = math.inf
    if config.time_limit is not None:
        deadline = time.perf_counter() + config.time_limit
    perf_counter = time.perf_counter
    query = state.query
    store = state.store
    n_rules = len(program)
    n = 0
    try:
        while query:
            if n >= step_limit:
                raise LimitExceeded("step", state, n)
            if not n & 255 and perf_counter() > deadline:
                raise LimitExceeded("time", state, n)
            n += 1
            if trace is not None:
                trace(n, _transition(program, state))
                continue
            entry = query[-1]
            dec = entry[0]
            if dec is None:
                state.activate()
            elif dec[0] not in store or dec[1] >= n_rules:
                query.pop()
            else:
                program[dec[1]]._apply(dec, dec[0], entry[1], state)
    finally:
        state.steps += n
    if trace is not None:
        trace(n, FINAL)
    return state


def run_query(
    program: list[RuleProgram],
    values: Iterable[Value],
    config: SolverConfig = DEFAULT_CONFIG,
    trace: TraceHook | None = None,
) -> Counter:
    """Run a fresh query and return the final store contents as a multiset.

    The Counter is built in id order, so its iteration order is the
    deterministic store order even though multiset equality ignores it.
    """
    final = run(program, new_state(values), config, trace)
    return Counter(final.store.values())
