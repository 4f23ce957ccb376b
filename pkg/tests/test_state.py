"""State operations: query stack, store, index relation, invariants."""

from __future__ import annotations

from dataclasses import dataclass

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chrlite.state import (
    ABSENT,
    AlreadyActiveError,
    ChrError,
    EmptyQueryError,
    InactiveTopError,
    Indexed,
    MissingIdError,
    State,
    new_state,
)


@dataclass(frozen=True)
class Keyed(Indexed):
    """Indexed test value; groups under its k field."""

    k: int
    v: int

    def index(self):
        return self.k


def test_new_state_puts_first_value_on_top():
    s = new_state([6, 9, 12])
    assert s.top() == (None, 6)
    assert s.store == {}
    assert s.next_id == 0
    assert s.index_rel == {}


def test_new_state_empty_query():
    s = new_state()
    assert s.query == []
    with pytest.raises(EmptyQueryError):
        s.top()
    with pytest.raises(EmptyQueryError):
        s.pop_query()
    with pytest.raises(EmptyQueryError):
        s.activate()


def test_push_query_first_argument_becomes_top():
    s = new_state([1])
    s.push_query(2, 3)
    assert s.pop_query() == 2
    assert s.pop_query() == 3
    assert s.pop_query() == 1


def test_push_query_single_value():
    s = new_state()
    s.push_query(7)
    assert s.top() == (None, 7)


def test_activate_assigns_ascending_ids_and_stores():
    s = new_state([6, 9])
    assert s.activate() == 0
    assert s.top() == ((0, 0, None), 6)
    s.pop_query()
    assert s.activate() == 1
    assert s.store == {0: 6, 1: 9}
    assert s.next_id == 2


def test_activate_twice_on_same_entry_is_an_error():
    s = new_state([5])
    s.activate()
    with pytest.raises(AlreadyActiveError):
        s.activate()


def test_activate_indexes_only_indexed_values():
    s = new_state([Keyed(1, 10), 42, Keyed(1, 11), Keyed(2, 12)])
    for _ in range(4):
        s.activate()
        s.pop_query()
    assert s.index_rel == {1: {0: None, 2: None}, 2: {3: None}}
    assert s.index_lookup(1) == (0, 2)
    assert s.index_lookup(2) == (3,)
    assert s.index_lookup(99) == ()


def test_remove_drops_store_and_index_entries():
    s = new_state([Keyed(1, 10), Keyed(1, 11)])
    s.activate()
    s.pop_query()
    s.activate()
    s.pop_query()
    s.remove([0])
    assert not s.alive(0)
    assert s.alive(1)
    # Shared bucket survives while a member is alive, then disappears.
    assert s.index_rel == {1: {1: None}}
    s.remove([1])
    assert s.index_rel == {}


def test_remove_missing_id_is_an_error():
    s = new_state([5])
    s.activate()
    s.remove([0])
    with pytest.raises(MissingIdError):
        s.remove([0])


def test_lookup_uses_absent_sentinel_so_none_is_storable():
    s = new_state([None])
    s.activate()
    assert s.lookup(0) is None
    assert s.lookup(1) is ABSENT


def test_active_iterator_roundtrip():
    s = new_state([5])
    s.activate()
    assert s.get_active_iterator() == (0, None)
    marker = object()
    s.set_active_iterator((3, marker))
    assert s.get_active_iterator() == (3, marker)
    assert s.top() == ((0, 3, marker), 5)


def test_active_iterator_requires_active_top():
    s = new_state([5])
    with pytest.raises(InactiveTopError):
        s.get_active_iterator()
    with pytest.raises(InactiveTopError):
        s.set_active_iterator((0, None))
    s.pop_query()
    with pytest.raises(EmptyQueryError):
        s.get_active_iterator()


def test_validate_accepts_a_healthy_state():
    s = new_state([Keyed(1, 10), 42])
    s.activate()
    s.pop_query()
    s.activate()
    s.validate()


def test_validate_rejects_out_of_range_store_id():
    s = new_state([5])
    s.activate()
    s.store[99] = 5
    with pytest.raises(ChrError):
        s.validate()


def test_validate_rejects_index_drift():
    s = new_state([Keyed(1, 10)])
    s.activate()
    s.index_rel[2] = {0: None}
    with pytest.raises(ChrError):
        s.validate()


def test_repr_mentions_store_and_query():
    s = new_state([6])
    s.activate()
    text = repr(s)
    assert "store={0: 6}" in text
    assert "next_id=1" in text


# An operation sequence interpreter for the property test: ops only ever
# use the public API in legal ways, so validate() must keep passing.
_OPS = st.lists(
    st.one_of(
        st.tuples(st.just("push"), st.integers(0, 9), st.booleans()),
        st.tuples(st.just("activate"), st.just(0), st.just(False)),
        st.tuples(st.just("pop"), st.just(0), st.just(False)),
        st.tuples(st.just("remove"), st.integers(0, 30), st.just(False)),
    ),
    max_size=40,
)


@settings(max_examples=200, deadline=None)
@given(_OPS)
def test_operation_sequences_preserve_invariants(ops):
    s = State()
    for name, arg, keyed in ops:
        if name == "push":
            s.push_query(Keyed(arg % 3, arg) if keyed else arg)
        elif name == "activate":
            if s.query and s.query[-1][0] is None:
                s.activate()
        elif name == "pop":
            if s.query:
                s.pop_query()
        elif name == "remove":
            if arg in s.store:
                s.remove([arg])
        s.validate()
        assert all(0 <= i < s.next_id for i in s.store)
    s.validate()
