"""Stimulus file grammar, macro expansion, and machine-level effect."""

import pytest

from washsim.config import RunConfig
from washsim.control import LoadSize, WashState
from washsim.machine import Machine
from washsim.runner import advance
from washsim.stimulus import (StimulusError, StimulusEvent, expand_rotary,
                              format_stimulus, parse_stimulus)


def test_basic_lines_parse():
    events = parse_stimulus(
        "# press and release start\n"
        "@100 BTN_START=1\n"
        "@900 BTN_START=0  # trailing comment\n"
        "\n"
        "@2000 SW_DOOR=1\n")
    assert events == [
        StimulusEvent(100, "BTN_START", True),
        StimulusEvent(900, "BTN_START", False),
        StimulusEvent(2000, "SW_DOOR", True),
    ]


def test_rot_macro_expands_quadrature_phases():
    events = parse_stimulus("@500 ROT CW\n", rotary_gap=10)
    # four (b, a) phases, both pins driven at each: 00 01 11 00
    assert events == expand_rotary(500, True, gap=10)
    by_cycle = {}
    for e in events:
        by_cycle.setdefault(e.at_cycle, {})[e.signal] = e.value
    assert sorted(by_cycle) == [500, 510, 520, 530]
    assert by_cycle[500] == {"ROT_A": False, "ROT_B": False}
    assert by_cycle[510] == {"ROT_A": True, "ROT_B": False}
    assert by_cycle[520] == {"ROT_A": True, "ROT_B": True}
    assert by_cycle[530] == {"ROT_A": False, "ROT_B": False}


def test_ccw_macro_swaps_lead_pin():
    events = expand_rotary(0, clockwise=False, gap=1)
    phase1 = {e.signal: e.value for e in events if e.at_cycle == 1}
    assert phase1 == {"ROT_A": False, "ROT_B": True}


@pytest.mark.parametrize("text,fragment", [
    ("BTN_START=1\n", "line 1"),
    ("@x BTN_START=1\n", "bad cycle"),
    ("@-5 BTN_START=1\n", "negative"),
    ("@10 NOPE=1\n", "unknown signal"),
    ("@10 BTN_START=2\n", "level must be 0 or 1"),
    ("@10 ROT SIDEWAYS\n", "CW or CCW"),
    ("@10 BTN_START 1\n", "cannot parse"),
    ("@20 BTN_START=1\n@10 BTN_START=0\n", "out of order"),
])
def test_parse_errors_carry_line_numbers(text, fragment):
    with pytest.raises(StimulusError) as exc:
        parse_stimulus(text)
    assert fragment in str(exc.value)


def test_error_line_number_counts_blank_and_comment_lines():
    with pytest.raises(StimulusError) as exc:
        parse_stimulus("# header\n\n@10 BAD=1\n")
    assert "line 3" in str(exc.value)


def test_same_cycle_duplicate_is_deduped():
    events = parse_stimulus("@100 SW_DOOR=1\n@100 SW_DOOR=1\n")
    assert events == [StimulusEvent(100, "SW_DOOR", True)]


def test_same_cycle_conflict_rejected():
    with pytest.raises(StimulusError, match="conflicting"):
        parse_stimulus("@100 ROT CW\n@100 ROT_A=1\n")


def test_macro_expansion_keeps_global_order():
    # a later line may fall inside the expanded macro window
    events = parse_stimulus("@100 ROT CW\n@1500 SW_DOOR=1\n", rotary_gap=1000)
    cycles = [e.at_cycle for e in events]
    assert cycles == sorted(cycles)
    assert StimulusEvent(1500, "SW_DOOR", True) in events


def test_format_parse_round_trip():
    events = [
        StimulusEvent(0, "SW_DOOR", False),
        StimulusEvent(10, "BTN_START", True),
        StimulusEvent(400, "BTN_START", False),
    ]
    text = format_stimulus(events)
    assert parse_stimulus(text) == events
    assert format_stimulus([]) == ""


# ------------------------------------------------- effect on the machine

def fast_config():
    return RunConfig(debounce_depth=2, debounce_period=10, time_scale=50_000)


def test_cw_detent_selects_next_load():
    m = Machine(fast_config())
    advance(m, 10_000, parse_stimulus("@100 ROT CW\n"))
    assert m.state is WashState.IDLE
    assert m.load is LoadSize.LARGE


def test_ccw_detent_selects_previous_load():
    m = Machine(fast_config())
    advance(m, 10_000, parse_stimulus("@100 ROT CCW\n"))
    assert m.load is LoadSize.SMALL


def test_one_detent_is_exactly_one_selection_step():
    m = Machine(fast_config())
    advance(m, 20_000, parse_stimulus("@100 ROT CW\n@10000 ROT CW\n"))
    assert m.load is LoadSize.LARGE  # second detent saturates
    loads = [entry[2] for entry in m.status_trace]
    assert loads == ["MEDIUM", "LARGE"]
