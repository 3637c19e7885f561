"""Virtual VGA monitor: frame capture, timing conformance, PPM output.

The capture plays the role of a real monitor: it sees only the sample
stream (color, hsync, vsync) and reconstructs pixel positions purely from
sync edges.  It locks to the first vsync falling edge, counts hsync
falling edges to find lines, and opens a 640-sample latch window a fixed
144 clocks (sync pulse + back porch) after each line's hsync fall.  A
completed frame is emitted at each subsequent vsync fall.  Shared counters
with the generator are deliberately avoided so sync bugs break capture
visibly instead of being masked.
"""

import numpy as np

from .vga import TimingParams, DEFAULT_TIMING, PALETTE_RGB

ACTIVE_W = 640
ACTIVE_H = 480
FRAME_PIXELS = ACTIVE_W * ACTIVE_H

# Clocks from an hsync falling edge to the first active pixel of the next
# row: sync pulse (96) + back porch (48).
FALL_TO_ACTIVE = 144
# 1-based index of the hsync fall that opens row 0's latch window: the two
# vsync-pulse lines and 29 back-porch lines each contribute one fall.
FALLS_BEFORE_ROW0 = 31
CLOCKS_PER_LINE = 800
LINES_PER_FRAME = 521


class DesyncError(Exception):
    """Observed hsync spacing that breaks the expected line period."""


class TraceTooShortError(ValueError):
    """Sync trace does not cover one full frame."""


class Frame:
    """One captured 640x480 image of 3-bit palette codes."""

    __slots__ = ("width", "height", "pixels", "seq")

    def __init__(self, pixels: np.ndarray, seq: int,
                 width: int = ACTIVE_W, height: int = ACTIVE_H) -> None:
        self.width = width
        self.height = height
        self.pixels = pixels  # uint8, row-major, length width*height
        self.seq = seq

    def same_image(self, other: "Frame") -> bool:
        return (self.width == other.width and self.height == other.height
                and np.array_equal(self.pixels, other.pixels))


class FrameCapture:
    """Edge-driven capture state machine.

    ``step`` consumes one pixel-clock sample; ``feed`` consumes a batch of
    samples with identical semantics (used by the fast simulation path).
    The batch path assumes latch windows never span a vsync fall, which
    holds for any stream with the configured geometry.
    """

    __slots__ = ("locked", "clock", "seq", "latched", "falls", "last_hfall",
                 "_prev_h", "_prev_v", "_pending", "_buf")

    def __init__(self) -> None:
        self.locked = False
        self.clock = 0  # pixel clocks consumed
        self.seq = 0
        self.latched = 0
        self.falls = 0  # hsync falls since last vsync fall
        self.last_hfall = None
        self._prev_h = None  # None until the first sample fixes levels
        self._prev_v = None
        self._pending = None  # (row, start_clock, filled)
        self._buf = np.zeros(FRAME_PIXELS, dtype=np.uint8)

    def snapshot(self):
        pend = self._pending
        return (self.locked, self.clock, self.seq, self.latched, self.falls,
                self.last_hfall, self._prev_h, self._prev_v,
                None if pend is None else tuple(pend),
                self._buf.tobytes())

    def _on_vsync_fall(self):
        """Lock on the first fall; afterwards emit when a full frame was
        latched, otherwise silently re-lock (partial first frame)."""
        frame = None
        if self.locked and self.latched == FRAME_PIXELS:
            frame = Frame(self._buf.copy(), self.seq)
            self.seq += 1
        self.locked = True
        self.falls = 0
        self.latched = 0
        self._pending = None
        return frame

    def _on_hsync_fall(self, at_clock: int):
        if self.locked and self.last_hfall is not None:
            period = at_clock - self.last_hfall
            if period != CLOCKS_PER_LINE:
                raise DesyncError(
                    f"hsync period {period} != {CLOCKS_PER_LINE} at pixel clock {at_clock}")
        self.last_hfall = at_clock
        if self.locked:
            self.falls += 1
            row = self.falls - FALLS_BEFORE_ROW0
            if 0 <= row < ACTIVE_H:
                self._pending = (row, at_clock + FALL_TO_ACTIVE, 0)

    def step(self, color: int, hsync: bool, vsync: bool):
        """One pixel-clock sample.  Returns a completed Frame or None."""
        c = self.clock
        frame = None
        if self._prev_v is None:
            self._prev_h = hsync
            self._prev_v = vsync
        else:
            if self._prev_v and not vsync:
                frame = self._on_vsync_fall()
            if self._prev_h and not hsync:
                self._on_hsync_fall(c)
            self._prev_h = hsync
            self._prev_v = vsync
        if self._pending is not None:
            row, start, filled = self._pending
            if start <= c:
                self._buf[row * ACTIVE_W + (c - start)] = color
                self.latched += 1
                filled += 1
                self._pending = None if filled == ACTIVE_W else (row, start, filled)
        self.clock = c + 1
        return frame

    def feed(self, colors: np.ndarray, hsyncs: np.ndarray,
             vsyncs: np.ndarray) -> list:
        """Batch-process samples; returns all frames completed inside."""
        n = len(colors)
        frames = []
        if n == 0:
            return frames
        base = self.clock
        if self._prev_v is None:
            prev_h, prev_v = bool(hsyncs[0]), bool(vsyncs[0])
        else:
            prev_h, prev_v = self._prev_h, self._prev_v

        # finish a latch window left open by the previous batch
        if self._pending is not None:
            row, start, filled = self._pending
            lo = start + filled - base
            if lo < n:
                take = min(ACTIVE_W - filled, n - lo)
                if take > 0:
                    at = row * ACTIVE_W + filled
                    self._buf[at:at + take] = colors[lo:lo + take]
                    self.latched += take
                    filled += take
                self._pending = None if filled == ACTIVE_W else (row, start, filled)

        hprev = np.empty(n, dtype=bool)
        hprev[0] = prev_h
        hprev[1:] = hsyncs[:-1]
        vprev = np.empty(n, dtype=bool)
        vprev[0] = prev_v
        vprev[1:] = vsyncs[:-1]
        hfalls = np.flatnonzero(hprev & ~hsyncs)
        vfalls = np.flatnonzero(vprev & ~vsyncs)

        hi = vi = 0
        nh, nv = len(hfalls), len(vfalls)
        while hi < nh or vi < nv:
            # at an index tie the vsync fall is handled first
            if vi < nv and (hi >= nh or vfalls[vi] <= hfalls[hi]):
                frame = self._on_vsync_fall()
                if frame is not None:
                    frames.append(frame)
                vi += 1
            else:
                i = int(hfalls[hi])
                self._on_hsync_fall(base + i)
                hi += 1
                if self._pending is not None:
                    row, start, _ = self._pending
                    lo = start - base
                    take = min(ACTIVE_W, n - lo)
                    if take > 0:
                        at = row * ACTIVE_W
                        self._buf[at:at + take] = colors[lo:lo + take]
                        self.latched += take
                        self._pending = (None if take == ACTIVE_W
                                         else (row, start, take))

        self._prev_h = bool(hsyncs[-1])
        self._prev_v = bool(vsyncs[-1])
        self.clock = base + n
        return frames


class ConformanceReport:
    __slots__ = ("lines_per_frame", "clocks_per_line", "hsync_pulse_clocks",
                 "vsync_pulse_lines", "active_samples", "violations",
                 "measurements")

    def __init__(self, lines_per_frame, clocks_per_line, hsync_pulse_clocks,
                 vsync_pulse_lines, active_samples, violations, measurements):
        self.lines_per_frame = lines_per_frame
        self.clocks_per_line = clocks_per_line
        self.hsync_pulse_clocks = hsync_pulse_clocks
        self.vsync_pulse_lines = vsync_pulse_lines
        self.active_samples = active_samples
        self.violations = violations
        self.measurements = measurements

    @property
    def passed(self) -> bool:
        return not self.violations


def _runs(mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Start (inclusive) and end (exclusive) indices of True runs."""
    if len(mask) == 0:
        return np.empty(0, dtype=int), np.empty(0, dtype=int)
    d = np.diff(mask.astype(np.int8))
    starts = np.flatnonzero(d == 1) + 1
    ends = np.flatnonzero(d == -1) + 1
    if mask[0]:
        starts = np.concatenate(([0], starts))
    if mask[-1]:
        ends = np.concatenate((ends, [len(mask)]))
    return starts, ends


def check_timing(hsync: np.ndarray, vsync: np.ndarray, active: np.ndarray,
                 params: TimingParams = DEFAULT_TIMING,
                 max_frames: int | None = None) -> ConformanceReport:
    """Measure sync geometry over complete frames in the trace.

    A frame is the span between consecutive vsync falling edges; every
    Figure-of-merit is measured (not assumed) and compared exactly against
    the expected geometry.  Raises TraceTooShortError unless at least one
    full frame is present.
    """
    hsync = np.asarray(hsync, dtype=bool)
    vsync = np.asarray(vsync, dtype=bool)
    active = np.asarray(active, dtype=bool)
    n = len(hsync)
    vfalls = np.flatnonzero(vsync[:-1] & ~vsync[1:]) + 1 if n > 1 else np.empty(0, int)
    if len(vfalls) < 2:
        raise TraceTooShortError("trace does not contain one full frame")
    if max_frames is not None:
        vfalls = vfalls[:max_frames + 1]

    violations = []

    def expect(kind, measured, expected):
        if measured != expected:
            v = (kind, measured, expected)
            if v not in violations:
                violations.append(v)

    hfalls = np.flatnonzero(hsync[:-1] & ~hsync[1:]) + 1
    hrises = np.flatnonzero(~hsync[:-1] & hsync[1:]) + 1
    vrises = np.flatnonzero(~vsync[:-1] & vsync[1:]) + 1
    act_starts, act_ends = _runs(active)

    lo, hi = int(vfalls[0]), int(vfalls[-1])
    n_frames = len(vfalls) - 1

    # horizontal: line period, pulse width, display, porches
    fr_hfalls = hfalls[(hfalls >= lo) & (hfalls < hi)]
    diffs = np.diff(fr_hfalls)
    for d in np.unique(diffs):
        expect("clocks_per_line", int(d), params.h_total)
    line = params.h_total if len(diffs) == 0 else int(np.bincount(diffs).argmax())
    for f in fr_hfalls:
        nxt = hrises[np.searchsorted(hrises, f)] if np.searchsorted(hrises, f) < len(hrises) else None
        if nxt is not None and nxt - f != params.h_pulse:
            expect("hsync_pulse_clocks", int(nxt - f), params.h_pulse)
    measured_pulse = params.h_pulse if not any(
        v[0] == "hsync_pulse_clocks" for v in violations) else next(
        v[1] for v in violations if v[0] == "hsync_pulse_clocks")

    fr_act = (act_starts >= lo) & (act_ends <= hi)
    starts, ends = act_starts[fr_act], act_ends[fr_act]
    for w in np.unique(ends - starts):
        expect("h_display", int(w), params.h_display)
    # porch from end of each active run to the next hsync fall
    idx = np.searchsorted(hfalls, ends)
    ok = idx < len(hfalls)
    for gap in np.unique(hfalls[idx[ok]] - ends[ok]):
        expect("h_front_porch", int(gap), params.h_front_porch)
    # porch from the preceding hsync rise to each active run start
    idx = np.searchsorted(hrises, starts, side="right") - 1
    ok = idx >= 0
    for gap in np.unique(starts[ok] - hrises[idx[ok]]):
        expect("h_back_porch", int(gap), params.h_back_porch)

    # vertical: per-frame counts and porch geometry in whole lines
    lines_measured = params.v_total
    vpulse_measured = params.v_pulse
    active_measured = params.h_display * params.v_display
    for k in range(n_frames):
        f0, f1 = int(vfalls[k]), int(vfalls[k + 1])
        expect("frame_clocks", f1 - f0, params.frame_clocks)
        nlines = int(np.count_nonzero((hfalls >= f0) & (hfalls < f1)))
        lines_measured = nlines
        expect("lines_per_frame", nlines, params.v_total)
        nact = int(np.count_nonzero(active[f0:f1]))
        active_measured = nact
        expect("active_samples", nact, params.h_display * params.v_display)
        ri = np.searchsorted(vrises, f0)
        if ri < len(vrises) and vrises[ri] < f1:
            pulse_clocks = int(vrises[ri]) - f0
            vpulse_measured, rem = divmod(pulse_clocks, line)
            expect("vsync_pulse_lines",
                   vpulse_measured if rem == 0 else pulse_clocks / line,
                   params.v_pulse)
            # back porch: vsync rise to the first active sample of the frame
            nx = np.searchsorted(starts, vrises[ri])
            if nx < len(starts):
                gap, rem = divmod(int(starts[nx]) - int(vrises[ri]), line)
                expect("v_back_porch", gap if rem == 0 else "fractional",
                       params.v_back_porch)
        in_frame = (starts >= f0) & (starts < f1)
        expect("v_display", int(np.count_nonzero(in_frame)), params.v_display)
        if np.any(in_frame):
            last_end = int(ends[in_frame][-1])
            gap, rem = divmod(f1 - (last_end + line - params.h_display), line)
            expect("v_front_porch", gap if rem == 0 else "fractional",
                   params.v_front_porch)

    measurements = {
        "clocks_per_line": line,
        "hsync_pulse_clocks": measured_pulse,
        "lines_per_frame": lines_measured,
        "vsync_pulse_lines": vpulse_measured,
        "active_samples": active_measured,
        "frames_measured": n_frames,
    }
    return ConformanceReport(lines_measured, line, measured_pulse,
                             vpulse_measured, active_measured, violations,
                             measurements)


def encode_ppm(frame: Frame) -> bytes:
    """Binary PPM (P6), one byte per channel, palette bits at full scale."""
    lut = np.array(PALETTE_RGB, dtype=np.uint8)
    rgb = lut[frame.pixels]
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + rgb.tobytes()
