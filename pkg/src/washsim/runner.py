"""Deterministic run driver: stimulus application and span scheduling.

``advance`` walks a machine to a target cycle, applying sorted stimulus
events exactly at their cycles and switching between the scalar step and
the bulk fast path.  ``run`` wraps it for one-shot scripted executions,
optionally writing captured frames to disk as they appear.
"""

import os

from .capture import encode_ppm
from .machine import Machine, MIN_BULK_SPAN


def advance(machine: Machine, until_cycle: int, events=(), next_idx: int = 0) -> int:
    """Drive the machine to until_cycle.  events is a list of StimulusEvent
    sorted by cycle; returns the index of the first unapplied event."""
    n_ev = len(events)
    while machine.cycle < until_cycle:
        t = machine.cycle
        while next_idx < n_ev and events[next_idx].at_cycle <= t:
            machine.set_input(events[next_idx].signal, events[next_idx].value)
            next_idx += 1
        bound = until_cycle
        if next_idx < n_ev and events[next_idx].at_cycle < bound:
            bound = events[next_idx].at_cycle
        span = bound - t
        if span >= MIN_BULK_SPAN and machine.quiescent():
            h = machine.horizon()
            if h is not None and h < span:
                span = h
            if span >= MIN_BULK_SPAN:
                machine.advance_bulk(span)
                continue
        machine.step()
    return next_idx


class RunResult:
    __slots__ = ("machine", "frames", "frame_count", "transitions",
                 "status_trace")

    def __init__(self, machine: Machine) -> None:
        self.machine = machine
        self.frames = machine.frames
        self.frame_count = machine.frame_count
        self.transitions = machine.transitions
        self.status_trace = machine.status_trace


def run(config=None, events=(), cycles: int = 0, frames_dir: str | None = None,
        retain_frames: bool = True, collect_sync: bool = False,
        use_fast_path: bool = True) -> RunResult:
    """Execute a scripted run for a fixed number of master cycles."""
    writer = None
    if frames_dir is not None:
        os.makedirs(frames_dir, exist_ok=True)

        def writer(frame):
            path = os.path.join(frames_dir, f"frame_{frame.seq}.ppm")
            with open(path, "wb") as fh:
                fh.write(encode_ppm(frame))

    machine = Machine(config, on_frame=writer, retain_frames=retain_frames,
                      collect_sync=collect_sync)
    if use_fast_path:
        advance(machine, cycles, list(events))
    else:
        idx = 0
        n_ev = len(events)
        while machine.cycle < cycles:
            while idx < n_ev and events[idx].at_cycle <= machine.cycle:
                machine.set_input(events[idx].signal, events[idx].value)
                idx += 1
            machine.step()
    return RunResult(machine)


def conformance_cycles(frames: int) -> int:
    """Master cycles needed for a sync trace containing `frames` complete
    frames (first vsync fall lands mid-frame after a cold start)."""
    first_vfall_pixels = 490 * 800  # scan reaches (line 490, pixel 0)
    return 2 * (first_vfall_pixels + frames * 416_800) + 8
