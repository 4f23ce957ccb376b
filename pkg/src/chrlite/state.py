"""Execution state: query stack, identified store, and store index.

The engine threads a single mutable State through every transition.  A
state bundles four components:

* ``query`` is the processing stack.  Each entry is a two element list
  ``[decoration, value]`` and the top of the stack is the *last* entry.
  A decoration is ``None`` while the value is inactive; activating the
  value replaces it with a mutable frame ``[id, rule_index, stream]``.
  ``stream`` is ``None`` until the rule at ``rule_index`` builds its
  match stream, so an uninitialised stream is distinct from an exhausted
  one (an exhausted stream is a real stream object that has run dry).
* ``store`` maps numeric ids to the values currently alive.  Ids are
  handed out in activation order and never reused, so iterating the
  store visits values in ascending id order.
* ``next_id`` is the id the next activation will receive.
* ``index_rel`` maps index keys to the set of store ids whose value
  indexes under that key.  Only values deriving from ``Indexed`` take
  part; everything else is simply never indexed.

All operations mutate the state in place.  The functional signatures in
the interface docs (op(s) -> s') describe the before/after relation, not
a copy.
"""

from __future__ import annotations

from typing import Any, Callable, Iterable

Value = Any
Id = int
IndexKey = Any


class ChrError(Exception):
    """Base class for errors raised by the engine."""


class EmptyQueryError(ChrError):
    """An operation needed a query element but the query was empty."""


class InactiveTopError(ChrError):
    """The top of the query had to be active but was not."""


class AlreadyActiveError(ChrError):
    """activate() was called while the top of the query was already active."""


class MissingIdError(ChrError):
    """remove() was asked to delete an id that is not in the store."""


class _Absent:
    """Singleton returned by lookup() for ids that are not alive."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "ABSENT"


ABSENT = _Absent()

# Internal miss sentinel; never visible to callers (unlike ABSENT, which
# is part of the lookup() contract and could in principle be stored).
_MISSING = object()


class Indexed:
    """Base class for values that participate in the store index.

    Subclasses define index() returning a hashable key.  On activation
    the store records the value's id under that key; index_lookup(key)
    then narrows candidate scans to the recorded ids.  The key must be
    a pure function of the (immutable) value, otherwise removal cannot
    find the entry again.
    """

    __slots__ = ()

    def index(self) -> IndexKey:
        raise NotImplementedError


class State:
    """Mutable execution state (query, store, id counter, index).

    ``mode`` and ``steps`` are bookkeeping slots used by the driver: the
    run loop stamps the active solver mode onto the state so rule
    programs know how to build match streams, and accumulates the number
    of transitions taken.  Neither affects the state semantics.
    """

    __slots__ = ("query", "store", "next_id", "index_rel", "mode", "steps")

    def __init__(self, values: Iterable[Value] = ()):
        # First element of `values` ends up on top of the stack.
        self.query: list[list[Any]] = [[None, v] for v in reversed(list(values))]
        self.store: dict[Id, Value] = {}
        self.next_id: Id = 0
        self.index_rel: dict[IndexKey, dict[Id, None]] = {}
        self.mode = None
        self.steps = 0

    # -- query ---------------------------------------------------------

    def push_query(self, *values: Value) -> None:
        """Push inactive values; the first argument becomes the new top."""
        if len(values) == 1:
            self.query.append([None, values[0]])
        else:
            self.query.extend([None, v] for v in reversed(values))

    def pop_query(self) -> Value:
        """Remove and return the top query value (its decoration is dropped)."""
        if not self.query:
            raise EmptyQueryError("pop_query on an empty query")
        return self.query.pop()[1]

    def top(self) -> tuple[tuple[Id, int, Any] | None, Value]:
        """Return (decoration, value) for the top entry without popping.

        The decoration comes back as a read-only tuple (id, rule_index,
        stream), or None when the top is inactive.
        """
        if not self.query:
            raise EmptyQueryError("top on an empty query")
        dec, value = self.query[-1]
        return (None if dec is None else (dec[0], dec[1], dec[2])), value

    # -- activation ----------------------------------------------------

    def activate(self) -> Id:
        """Activate the top query value.

        Assigns the next free id, inserts the value into the store (and
        the index, if the value is Indexed), and decorates the entry
        with a fresh frame at rule index 0 with an uninitialised stream.
        Returns the assigned id.
        """
        if not self.query:
            raise EmptyQueryError("activate on an empty query")
        entry = self.query[-1]
        if entry[0] is not None:
            raise AlreadyActiveError("top of the query is already active")
        value = entry[1]
        i = self.next_id
        self.next_id = i + 1
        entry[0] = [i, 0, None]
        self.store[i] = value
        if isinstance(value, Indexed):
            key = value.index()
            bucket = self.index_rel.get(key)
            if bucket is None:
                self.index_rel[key] = {i: None}
            else:
                bucket[i] = None
        return i

    # -- store ---------------------------------------------------------

    def remove(self, ids: Iterable[Id]) -> None:
        """Delete ids from the store and drop their index entries.

        Every id must be alive; a missing id raises MissingIdError (the
        engine only removes ids a match stream just revalidated, so a
        miss signals caller misuse).
        """
        store = self.store
        index_rel = self.index_rel
        for i in ids:
            value = store.pop(i, _MISSING)
            if value is _MISSING:
                raise MissingIdError(f"id {i} is not in the store")
            if isinstance(value, Indexed):
                key = value.index()
                bucket = index_rel.get(key)
                if bucket is not None:
                    bucket.pop(i, None)
                    if not bucket:
                        del index_rel[key]

    def alive(self, i: Id) -> bool:
        return i in self.store

    def lookup(self, i: Id) -> Value:
        """Return the value stored under id `i`, or ABSENT if it is gone.

        ABSENT (not None) is the miss sentinel so that None remains a
        legal store value.
        """
        return self.store.get(i, ABSENT)

    def index_lookup(self, key: IndexKey) -> tuple[Id, ...]:
        """Ids recorded under `key`, in activation order; () for unknown keys."""
        bucket = self.index_rel.get(key)
        return () if bucket is None else tuple(bucket)

    # -- active iterator -----------------------------------------------

    def get_active_iterator(self) -> tuple[int, Any]:
        """Return the (rule_index, stream) pair of the active top entry."""
        if not self.query:
            raise EmptyQueryError("get_active_iterator on an empty query")
        dec = self.query[-1][0]
        if dec is None:
            raise InactiveTopError("top of the query is not active")
        return dec[1], dec[2]

    def set_active_iterator(self, iterator: tuple[int, Any]) -> None:
        """Replace the (rule_index, stream) pair of the active top entry."""
        if not self.query:
            raise EmptyQueryError("set_active_iterator on an empty query")
        dec = self.query[-1][0]
        if dec is None:
            raise InactiveTopError("top of the query is not active")
        dec[1], dec[2] = iterator

    # -- diagnostics -----------------------------------------------------

    def validate(self) -> None:
        """Check the structural invariants; raise ChrError on violation.

        Intended for tests and traced runs, not the hot path.
        """
        for i in self.store:
            if not (isinstance(i, int) and 0 <= i < self.next_id):
                raise ChrError(f"store id {i!r} out of range [0, {self.next_id})")
        for entry in self.query:
            if not (isinstance(entry, list) and len(entry) == 2):
                raise ChrError("malformed query entry")
            dec = entry[0]
            if dec is None:
                continue
            if not (isinstance(dec, list) and len(dec) == 3):
                raise ChrError("malformed decoration")
            if not (0 <= dec[0] < self.next_id):
                raise ChrError(f"decoration id {dec[0]!r} out of range")
            if not (isinstance(dec[1], int) and dec[1] >= 0):
                raise ChrError(f"decoration rule index {dec[1]!r} invalid")
        rebuilt: dict[IndexKey, dict[Id, None]] = {}
        for i, value in self.store.items():
            if isinstance(value, Indexed):
                rebuilt.setdefault(value.index(), {})[i] = None
        if rebuilt != self.index_rel:
            raise ChrError("index relation out of sync with the store")

    def __repr__(self) -> str:
        q = [(None if d is None else (d[0], d[1]), v) for d, v in reversed(self.query)]
        return f"State(query={q!r}, store={self.store!r}, next_id={self.next_id})"


def new_state(values: Iterable[Value] = ()) -> State:
    """Build the initial state for a query (first value on top, empty store)."""
    return State(values)
