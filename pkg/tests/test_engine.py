"""Rule programs, composition, driver steps, run loop, limits."""

from __future__ import annotations

from collections import Counter

import pytest

from chrlite import (
    Mode,
    SolverConfig,
    compose,
    gcd_program,
    new_state,
    rule,
    run,
    run_query,
    step,
)
from chrlite.engine import ACTIVATE, APPLY, DROP, FINAL, LimitExceeded, RuleProgram


def test_rule_builds_a_singleton_program():
    prog = rule("zero", [], [lambda x: x == 0], lambda _: True, lambda _: [])
    assert len(prog) == 1
    rp = prog[0]
    assert isinstance(rp, RuleProgram)
    assert rp.name == "zero"
    assert rp.kept_len == 0
    assert rp.removed_len == 1
    assert "zero" in repr(rp)


def test_compose_concatenates_in_argument_order():
    gcd = gcd_program()
    assert [rp.name for rp in gcd] == ["zero", "subtract"]
    doubled = compose(gcd, gcd)
    assert [rp.name for rp in doubled] == ["zero", "subtract", "zero", "subtract"]


def _activated_gcd_state():
    # Store {(0, 6), (1, 9)} with the active pair (2, 12) on top.
    s = new_state([6, 9, 12])
    s.activate()
    s.pop_query()
    s.activate()
    s.pop_query()
    s.activate()
    s.mode = Mode.LAZY_INDEXED
    return s


def test_rule_application_removes_fires_and_pushes():
    # Applying subtract: 12 matches the removed position against the kept
    # 6, so 12 leaves query and store and the body pushes 12 - 6 = 6.
    s = _activated_gcd_state()
    subtract = gcd_program()[1]
    subtract(2, 12, s)
    assert s.store == {0: 6, 1: 9}
    assert s.query[-1] == [None, 6]
    assert len(s.query) == 1


def test_rule_with_no_acceptable_pattern_advances_without_a_stream():
    s = _activated_gcd_state()
    zero = gcd_program()[0]
    zero(2, 12, s)
    # Nothing matched: the entry moved on to the next rule index and no
    # stream was left behind.
    assert s.get_active_iterator() == (1, None)
    assert s.store == {0: 6, 1: 9, 2: 12}


def test_exhausted_stream_advances_the_rule_index():
    s = new_state([5])
    s.activate()
    s.mode = Mode.LAZY_INDEXED
    never = rule("never", [lambda v: True], [], lambda v: False, lambda v: [])[0]
    never(0, 5, s)
    # The guard rejected everything: stream drained on the first pull.
    assert s.get_active_iterator() == (1, None)
    assert len(s.query) == 1


def test_kept_only_rule_leaves_the_active_entry_in_place():
    s = new_state([5])
    s.activate()
    s.mode = Mode.LAZY_INDEXED
    copy = rule("copy", [lambda v: v > 0], [], lambda v: True, lambda v: [v * 10])[0]
    copy(0, 5, s)
    # Active value kept: still in store, still on the stack under the
    # body's product.
    assert s.store == {0: 5}
    assert [e[1] for e in s.query] == [5, 50]
    assert s.query[0][0] is not None and s.query[1][0] is None


def test_step_activates_inactive_top():
    s = new_state([6])
    assert step(gcd_program(), s) is s
    assert s.top() == ((0, 0, None), 6)


def test_step_drops_dead_active_top():
    s = new_state([6])
    s.activate()
    s.remove([0])
    step(gcd_program(), s)
    assert s.query == []


def test_step_drops_entry_past_the_last_rule():
    prog = gcd_program()
    s = new_state([6])
    s.activate()
    s.set_active_iterator((len(prog), None))
    step(prog, s)
    assert s.query == []
    assert s.store == {0: 6}


def test_step_on_final_state_is_identity():
    s = new_state()
    assert step(gcd_program(), s) is s
    assert s.query == [] and s.store == {}


def test_run_reaches_the_gcd_fixpoint():
    final = run(gcd_program(), new_state([6, 9, 12]))
    assert list(final.store.values()) == [3]
    assert final.query == []
    assert final.steps > 0
    assert final.mode is Mode.LAZY_INDEXED


def test_run_stamps_the_configured_mode():
    final = run(gcd_program(), new_state([4, 6]), SolverConfig(mode=Mode.EAGER))
    assert final.mode is Mode.EAGER
    assert list(final.store.values()) == [2]


def test_run_results_agree_across_modes_ids_included():
    stores = [
        run(gcd_program(), new_state([12, 18, 30]), SolverConfig(mode=m)).store
        for m in Mode
    ]
    assert stores[0] == stores[1] == stores[2]


def test_run_query_returns_final_multiset():
    assert run_query(gcd_program(), [6, 9]) == Counter({3: 1})
    assert run_query(gcd_program(), [8]) == Counter({8: 1})
    assert run_query(gcd_program(), []) == Counter()


def test_trace_hook_sees_every_transition():
    events = []
    final = run(gcd_program(), new_state([6, 9]), trace=lambda n, kind: events.append((n, kind)))
    kinds = [kind for _, kind in events]
    assert kinds[0] == ACTIVATE
    assert kinds[-1] == FINAL
    assert set(kinds) == {ACTIVATE, APPLY, DROP, FINAL}
    # Step numbers count transitions 1..steps, then FINAL repeats the last.
    assert [n for n, _ in events[:-1]] == list(range(1, final.steps + 1))
    assert events[-1][0] == final.steps


def test_traced_and_untraced_runs_agree():
    plain = run(gcd_program(), new_state([21, 35]))
    traced = run(gcd_program(), new_state([21, 35]), trace=lambda n, kind: None)
    assert plain.store == traced.store
    assert plain.steps == traced.steps


def test_step_limit_raises_with_partial_state():
    with pytest.raises(LimitExceeded) as info:
        run(gcd_program(), new_state([6, 9]), SolverConfig(step_limit=3))
    err = info.value
    assert err.reason == "step"
    assert err.steps == 3
    assert err.state.steps == 3
    assert err.state.query, "partial state should still have work pending"


def test_time_limit_raises_time_reason():
    with pytest.raises(LimitExceeded) as info:
        run(gcd_program(), new_state([2, 200_000]), SolverConfig(time_limit=1e-9))
    assert info.value.reason == "time"


def test_disabled_limits_mean_run_to_completion():
    final = run(gcd_program(), new_state([6, 9]), SolverConfig(step_limit=None, time_limit=None))
    assert list(final.store.values()) == [3]


def test_body_products_activate_in_order():
    # A body returning several values: the first product ends up on top
    # of the stack, so it activates first and gets the smaller id.
    fan = rule("fan", [], [lambda v: v == 0], lambda v: True,
               lambda v: ["first", "second"])
    final = run(fan, new_state([0]))
    assert final.store == {1: "first", 2: "second"}


def test_eager_mode_materializes_streams_up_front():
    # Under EAGER the stream snapshot is taken when the rule first
    # touches the active entry, so partners removed afterwards are still
    # skipped only through revalidation, never re-enumerated.  Observable
    # here: results match the lazy modes on a program where a kept rule
    # fires repeatedly.
    for query in ([4, 6], [5, 715], [12, 18, 30]):
        finals = {
            mode: run_query(gcd_program(), query, SolverConfig(mode=mode))
            for mode in Mode
        }
        assert finals[Mode.EAGER] == finals[Mode.LAZY] == finals[Mode.LAZY_INDEXED]
