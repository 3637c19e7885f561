"""Debouncer, rotary filter, edge detector, and door gate tests.

The rotary oracle here is an independent straight-line replay of the
filter's case table, kept deliberately separate from the implementation.
"""

import random

import pytest
from hypothesis import given, settings, strategies as st

from washsim.conditioning import (Debouncer, DoorGate, EdgeDetector,
                                  RotaryFilter, SPIN_CODE, HOLD_CODE)
from washsim.control import WashState


# ------------------------------------------------------------ debouncer

def sample_burst(db, samples):
    """Feed one raw sample per sampling instant (P=1 debouncer)."""
    changes = []
    for s in samples:
        _, changed = db.step(bool(s))
        if changed:
            changes.append(db.stable)
    return changes


def test_debounce_unanimous_agreement_flips():
    db = Debouncer(depth=4, period=1)
    changes = sample_burst(db, [1, 1, 1, 1])
    assert db.stable is True
    assert changes == [True]


def test_debounce_bounce_then_settle_single_change():
    # hand-derived: shift = 0001, 0010, 0101, 1011, 0111, 1111
    # so the burst 1,0,1,1 then 1,1,1,1 flips exactly once, at sample 6
    db = Debouncer(depth=4, period=1)
    changes = sample_burst(db, [1, 0, 1, 1, 1, 1, 1, 1])
    assert changes == [True]
    assert db.stable is True


def test_debounce_constant_zero_never_changes():
    db = Debouncer(depth=4, period=1)
    assert sample_burst(db, [0] * 100) == []
    assert db.stable is False


def test_debounce_sample_period_gates_sampling():
    db = Debouncer(depth=2, period=5)
    outs = [db.step(True) for _ in range(10)]
    # samples at cycles 0 and 5; unanimity reached on the second sample
    assert [s for s, _ in outs] == [False] * 5 + [True] * 5
    assert [c for _, c in outs].count(True) == 1


def test_debounce_noise_immunity_no_persistent_level():
    # runs shorter than depth never flip the output
    rng = random.Random(11)
    db = Debouncer(depth=8, period=1)
    level = True
    for _ in range(400):
        for _ in range(rng.randint(1, 7)):
            _, changed = db.step(level)
            assert not changed
        level = not level
    assert db.stable is False


@given(st.integers(1, 12), st.integers(1, 7), st.booleans(),
       st.integers(0, 400), st.data())
@settings(max_examples=120)
def test_debounce_closed_form_advance_matches_scalar(depth, period, raw, n, data):
    seed_samples = data.draw(st.lists(st.booleans(), min_size=0, max_size=20))
    warm = data.draw(st.integers(0, 3 * period))
    a = Debouncer(depth, period)
    b = Debouncer(depth, period)
    for db in (a, b):
        for s in seed_samples:
            db.step(s)
        for _ in range(warm):
            db.step(seed_samples[-1] if seed_samples else False)
    # cap n below the first stable flip, the advance precondition
    bound = a.cycles_before_change(raw)
    if bound is not None and n > bound:
        n = bound
    for _ in range(n):
        a.step(raw)
    b.advance(n, raw)
    assert (a.shift, a.stable, a.divider) == (b.shift, b.stable, b.divider)


@given(st.integers(1, 12), st.integers(1, 9), st.booleans(), st.data())
@settings(max_examples=120)
def test_debounce_flip_horizon_is_exact(depth, period, raw, data):
    db = Debouncer(depth, period)
    for s in data.draw(st.lists(st.booleans(), min_size=0, max_size=25)):
        db.step(s)
    bound = db.cycles_before_change(raw)
    if bound is None:
        for _ in range(depth * period + 5):
            _, changed = db.step(raw)
            assert not changed
    else:
        for _ in range(bound):
            _, changed = db.step(raw)
            assert not changed
        _, changed = db.step(raw)
        assert changed  # the very next cycle is the flip


# --------------------------------------------------------- rotary filter

def replay_case_table(samples):
    """Independent oracle: literal replay of the decoder's case table.
    Returns the (event, direction) pulse list."""
    sync = 0
    q1 = q2 = delay = False
    pulses = []
    for b, a in samples:
        old_q1 = q1
        if sync == 0:
            q1 = False
        elif sync == 1:
            q2 = False
        elif sync == 2:
            q2 = True
        else:
            q1 = True
        delay = old_q1
        sync = (b << 1) | a
        if q1 and not delay:
            pulses.append(q2)
    return pulses


def run_filter(samples, hold=4):
    """Feed (b, a) pairs, holding each a few cycles like real inputs."""
    rot = RotaryFilter()
    pulses = []
    for b, a in samples:
        for _ in range(hold):
            ev, dirn = rot.step(bool(a), bool(b))
            if ev:
                pulses.append(dirn)
    return pulses


def test_rotary_cw_detent_single_event():
    assert run_filter([(0, 0), (0, 1), (1, 1)]) == [False]


def test_rotary_ccw_detent_single_event():
    assert run_filter([(0, 0), (1, 0), (1, 1)]) == [True]


def test_rotary_jitter_cannot_rearm_without_00():
    # 00, 01, 00, 01, 11, 01, 11 -> exactly one event
    seq = [(0, 0), (0, 1), (0, 0), (0, 1), (1, 1), (0, 1), (1, 1)]
    assert len(run_filter(seq)) == 1


def test_rotary_event_is_single_cycle_pulse():
    rot = RotaryFilter()
    events = 0
    for b, a in [(0, 0), (1, 1), (1, 1), (1, 1), (1, 1)]:
        ev, _ = rot.step(bool(a), bool(b))
        events += ev
    assert events == 1


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)),
                min_size=1, max_size=60))
@settings(max_examples=200)
def test_rotary_matches_case_table_oracle(samples):
    rot = RotaryFilter()
    got = []
    for b, a in samples:
        ev, dirn = rot.step(bool(a), bool(b))
        if ev:
            got.append(dirn)
    assert got == replay_case_table(samples)


def test_rotary_settled_fixed_point():
    rot = RotaryFilter()
    assert rot.settled(False, False)
    rot.step(True, True)
    assert not rot.settled(True, True)
    for _ in range(4):
        rot.step(True, True)
    assert rot.settled(True, True)
    before = (rot.sync, rot.q1, rot.q2, rot.delay_q1)
    ev, _ = rot.step(True, True)
    assert not ev and (rot.sync, rot.q1, rot.q2, rot.delay_q1) == before


# --------------------------------------------------------- edge detector

def test_edge_rising_pulse_once():
    ed = EdgeDetector()
    out = [ed.step(bool(v)) for v in [0, 1, 1, 1, 0, 0, 1]]
    assert out == [False, True, False, False, False, False, True]


def test_edge_level_held_100_cycles_single_pulse():
    ed = EdgeDetector()
    assert sum(ed.step(True) for _ in range(100)) == 1


def test_edge_falling_ignored():
    ed = EdgeDetector()
    ed.step(True)
    assert ed.step(False) is False


# ------------------------------------------------------------- door gate

def test_gate_codes_match_fsm_encodings():
    assert SPIN_CODE == int(WashState.SPIN)
    assert HOLD_CODE == int(WashState.HOLD)


@pytest.mark.parametrize("state,expected", [
    (WashState.SPIN, True),
    (WashState.HOLD, True),
    (WashState.IDLE, False),
    (WashState.FILL, False),
    (WashState.WASH, False),
    (WashState.DRAIN, False),
    (WashState.RINSE_FILL, False),
    (WashState.RINSE_AGITATE, False),
    (WashState.RINSE_DRAIN, False),
    (WashState.DONE, False),
])
def test_gate_blocks_outside_spin_hold(state, expected):
    gate = DoorGate()
    assert gate.step(True, False, int(state)) is expected


def test_gate_start_button_overrides():
    gate = DoorGate()
    gate.step(True, False, SPIN_CODE)
    assert gate.block
    assert gate.step(True, True, SPIN_CODE) is False


def test_gate_follows_switch_level_in_spin():
    gate = DoorGate()
    assert gate.step(False, False, SPIN_CODE) is False
    assert gate.step(True, False, SPIN_CODE) is True
    assert gate.step(False, False, SPIN_CODE) is False
