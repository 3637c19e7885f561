"""Scripted input stimulus: file format, parsing, macro expansion.

Line format, one event per line ('#' starts a comment):

    @<cycle> <SIGNAL>=<0|1>     set a raw input level at a master cycle
    @<cycle> ROT <CW|CCW>       one full detent turn of the knob

Signals: BTN_START, BTN_RESET, SW_DOOR, ROT_A, ROT_B.  Lines must be in
non-decreasing cycle order.  A ROT macro expands to the four quadrature
phases (00, 01, 11, 00 on {b,a} for CW; 00, 10, 11, 00 for CCW) spaced by
a configurable gap, driving both pins at each phase.
"""

from typing import NamedTuple

SIGNALS = ("BTN_START", "BTN_RESET", "SW_DOOR", "ROT_A", "ROT_B")

DEFAULT_ROTARY_GAP = 1_000  # master cycles between quadrature phases

# (b, a) level pairs for one detent traversal
CW_PHASES = ((0, 0), (0, 1), (1, 1), (0, 0))
CCW_PHASES = ((0, 0), (1, 0), (1, 1), (0, 0))


class StimulusEvent(NamedTuple):
    at_cycle: int
    signal: str
    value: bool


class StimulusError(ValueError):
    """Malformed, unsorted, or conflicting stimulus input."""


def expand_rotary(at_cycle: int, clockwise: bool,
                  gap: int = DEFAULT_ROTARY_GAP) -> list[StimulusEvent]:
    phases = CW_PHASES if clockwise else CCW_PHASES
    out = []
    for k, (b, a) in enumerate(phases):
        t = at_cycle + k * gap
        out.append(StimulusEvent(t, "ROT_A", bool(a)))
        out.append(StimulusEvent(t, "ROT_B", bool(b)))
    return out


def parse_stimulus(text: str,
                   rotary_gap: int = DEFAULT_ROTARY_GAP) -> list[StimulusEvent]:
    events = []
    last_cycle = -1
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not parts[0].startswith("@"):
            raise StimulusError(f"line {lineno}: expected '@<cycle>', got {parts[0]!r}")
        try:
            cycle = int(parts[0][1:])
        except ValueError:
            raise StimulusError(f"line {lineno}: bad cycle number {parts[0][1:]!r}")
        if cycle < 0:
            raise StimulusError(f"line {lineno}: negative cycle")
        if cycle < last_cycle:
            raise StimulusError(
                f"line {lineno}: cycle {cycle} out of order (after {last_cycle})")
        last_cycle = cycle

        if len(parts) == 3 and parts[1] == "ROT":
            if parts[2] not in ("CW", "CCW"):
                raise StimulusError(f"line {lineno}: ROT direction must be CW or CCW")
            events.extend(expand_rotary(cycle, parts[2] == "CW", rotary_gap))
        elif len(parts) == 2 and "=" in parts[1]:
            name, _, val = parts[1].partition("=")
            if name not in SIGNALS:
                raise StimulusError(f"line {lineno}: unknown signal {name!r}")
            if val not in ("0", "1"):
                raise StimulusError(f"line {lineno}: level must be 0 or 1")
            events.append(StimulusEvent(cycle, name, val == "1"))
        else:
            raise StimulusError(f"line {lineno}: cannot parse {line!r}")

    events.sort(key=lambda e: e.at_cycle)
    seen: dict[tuple[int, str], bool] = {}
    deduped = []
    for ev in events:
        key = (ev.at_cycle, ev.signal)
        if key in seen:
            if seen[key] != ev.value:
                raise StimulusError(
                    f"conflicting levels for {ev.signal} at cycle {ev.at_cycle}")
            continue
        seen[key] = ev.value
        deduped.append(ev)
    return deduped


def format_stimulus(events: list[StimulusEvent]) -> str:
    """Render pin-level events back into the file format (used to persist
    live-session input logs as replayable scripts)."""
    lines = [f"@{e.at_cycle} {e.signal}={1 if e.value else 0}" for e in events]
    return "\n".join(lines) + ("\n" if lines else "")
