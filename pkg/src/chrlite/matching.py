"""Lazy head matching against the identified store.

Given a rule head (a sequence of unary predicates, optionally carrying
index hints), an active value and a state, the matcher enumerates every
way to complete the head: the active value is tried at each head
position from right to left, and the remaining positions are filled
with store values right to left by backtracking.  Candidates are always
ids strictly smaller than the active id, each id is used at most once,
and the guard decides on the complete assignment.

Enumeration is demand driven.  A MatchStream produces one matching per
next() call and owns no snapshot of the store: candidates that died
since the stream was built are skipped when they come up, and a
matching is revalidated (all ids still alive) right before delivery.
Enumeration order is deterministic, since store and index buckets both
iterate in ascending id order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterator, NamedTuple, Sequence

from .state import Id, IndexKey, State, Value

Pattern = Callable[[Value], bool]
Guard = Callable[..., bool]


@dataclass(frozen=True)
class IndexedBy:
    """A head pattern decorated with an index hint.

    ``ref`` names another head position and ``key`` maps that position's
    value to the index key under which candidates for *this* position
    were stored.  ``pattern`` is the plain predicate a candidate must
    satisfy regardless.  The hint is only consulted when the engine
    matches with indexing enabled and ``ref`` is bound before this
    position (i.e. ``ref`` is larger); otherwise it is inert and the
    position falls back to a full store scan.  A consistent hint never
    changes the set of matchings, it only narrows how many candidates
    get probed.
    """

    ref: int
    key: Callable[[Value], IndexKey]
    pattern: Pattern

    def __call__(self, value: Value) -> bool:
        return self.pattern(value)


class Matching(NamedTuple):
    """A complete head assignment.

    ids[active_pos] is the active id; every other id is strictly
    smaller.  values are the store values the ids had when matched.
    """

    active_pos: int
    ids: tuple[Id, ...]
    values: tuple[Value, ...]


# Plan entry: (predicate, ref position or -1 when the hint is unusable, key fn).
_PlanEntry = tuple[Pattern, int, Any]


def compile_head(head: Sequence[Pattern | IndexedBy]) -> tuple[_PlanEntry, ...]:
    """Normalise a head into (pattern, ref, key) triples.

    Hints that reference an earlier or the same position cannot fire
    (the reference is not bound yet when the position is filled) and are
    recorded as plain patterns.  A reference outside the head is a
    malformed rule and rejected outright.
    """
    plan: list[_PlanEntry] = []
    n = len(head)
    for j, pattern in enumerate(head):
        if isinstance(pattern, IndexedBy):
            if not 0 <= pattern.ref < n:
                raise ValueError(
                    f"index hint at head position {j} references position "
                    f"{pattern.ref}, outside the head of length {n}"
                )
            if pattern.ref > j:
                plan.append((pattern.pattern, pattern.ref, pattern.key))
            else:
                plan.append((pattern.pattern, -1, None))
        else:
            plan.append((pattern, -1, None))
    return tuple(plan)


def _assign1(
    plan: tuple[_PlanEntry, ...],
    guard: Guard,
    active_id: Id,
    active_value: Value,
    state: State,
    use_index: bool,
) -> Iterator[Matching]:
    """Single-pattern head: at most the active value itself matches."""
    if plan[0][0](active_value) and guard(active_value):
        yield Matching(0, (active_id,), (active_value,))


def _assign2(
    plan: tuple[_PlanEntry, ...],
    guard: Guard,
    active_id: Id,
    active_value: Value,
    state: State,
    use_index: bool,
) -> Iterator[Matching]:
    """Two-pattern head, unrolled.

    Same enumeration order and liveness rules as the general
    backtracking version, in one generator frame; two-headed rules
    dominate realistic programs, so this is the hot path.  After
    compile_head the only live hint for a pair head sits on position 0
    referencing position 1.
    """
    store = state.store
    (pred0, ref0, key0), (pred1, _, _) = plan
    mk = Matching
    if pred1(active_value):
        # Active at position 1; enumerate partners for position 0.
        # Candidates are snapshotted; liveness is rechecked per pull.
        if ref0 >= 0 and use_index:
            bucket = state.index_rel.get(key0(active_value))
            candidates = list(bucket) if bucket else ()
        else:
            candidates = list(store)
        for c in candidates:
            if c >= active_id or c not in store:
                continue
            v = store[c]
            if pred0(v) and guard(v, active_value):
                yield mk(1, (c, active_id), (v, active_value))
    if pred0(active_value):
        # Active at position 0; a hint here pins the active value's own
        # index key, which the partner at position 1 determines.
        hinted = ref0 >= 0 and use_index
        index_rel = state.index_rel
        for c in list(store):
            if c >= active_id or c not in store:
                continue
            v = store[c]
            if not pred1(v):
                continue
            if hinted:
                bucket = index_rel.get(key0(v))
                if bucket is None or active_id not in bucket:
                    continue
            if guard(active_value, v):
                yield mk(0, (active_id, c), (active_value, v))


def _assignments(
    plan: tuple[_PlanEntry, ...],
    guard: Guard,
    active_id: Id,
    active_value: Value,
    state: State,
    use_index: bool,
) -> Iterator[Matching]:
    """Yield matchings; the general backtracking core."""
    n = len(plan)
    store = state.store
    index_rel = state.index_rel
    ids = [0] * n
    values: list[Value] = [None] * n

    def bind(j: int, active_pos: int) -> Iterator[Matching]:
        if j < 0:
            # Complete assignment: revalidate before the guard sees it.
            # The active id is exempt; its liveness is the driver's concern.
            for bound in ids:
                if bound != active_id and bound not in store:
                    return
            vals = tuple(values)
            if guard(*vals):
                yield Matching(active_pos, tuple(ids), vals)
            return
        pred, ref, key = plan[j]
        if j == active_pos:
            if ref >= 0 and use_index:
                # The hint pins the active value's own index key; if the
                # active id was not stored under it, nothing can match here.
                bucket = index_rel.get(key(values[ref]))
                if bucket is None or active_id not in bucket:
                    return
            yield from bind(j - 1, active_pos)
            return
        if ref >= 0 and use_index:
            bucket = index_rel.get(key(values[ref]))
            candidates = list(bucket) if bucket else ()
        else:
            candidates = list(store)
        for c in candidates:
            if c >= active_id or c not in store:
                continue
            for k in range(j + 1, n):
                if ids[k] == c:
                    break
            else:
                v = store[c]
                if pred(v):
                    ids[j] = c
                    values[j] = v
                    yield from bind(j - 1, active_pos)

    for i in range(n - 1, -1, -1):
        if plan[i][0](active_value):
            ids[i] = active_id
            values[i] = active_value
            yield from bind(n - 1 if i < n - 1 else n - 2, i)


class MatchStream:
    """Pull-based stream of matchings for one rule head and active value.

    next() returns the next matching whose partner ids are all still
    alive, or None once the stream is exhausted.  Matchings computed
    against store values that were removed in the meantime are silently
    skipped, which keeps streams safe to suspend across store mutations.
    The active id itself is exempt from the liveness check: the driver
    never applies a rule to a dead active value.
    """

    __slots__ = ("_state", "_active_id", "_source")

    def __init__(self, state: State, active_id: Id, source: Iterator[Matching]):
        self._state = state
        self._active_id = active_id
        self._source = source

    def next(self) -> Matching | None:
        store = self._state.store
        active = self._active_id
        for m in self._source:
            for i in m.ids:
                if i != active and i not in store:
                    break
            else:
                return m
        return None

    def materialize(self) -> list[Matching]:
        """Drain the stream; handy for tests and eager matching."""
        out = []
        m = self.next()
        while m is not None:
            out.append(m)
            m = self.next()
        return out


def assignment_source(plan_len: int):
    """Pick the matcher core for a head length (specialised for 1 and 2)."""
    if plan_len == 1:
        return _assign1
    if plan_len == 2:
        return _assign2
    return _assignments


def match_head(
    head: Sequence[Pattern | IndexedBy],
    guard: Guard,
    active_id: Id,
    active_value: Value,
    state: State,
    use_index: bool = True,
) -> MatchStream:
    """Build the lazy matching stream for `head` with the given active value."""
    plan = compile_head(head)
    core = assignment_source(len(plan))
    return MatchStream(state, active_id, core(plan, guard, active_id, active_value, state, use_index))
