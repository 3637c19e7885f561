"""Virtual monitor tests: capture, conformance measurement, PPM output."""

import random

import numpy as np
import pytest

from washsim.capture import (DesyncError, Frame, FrameCapture,
                             TraceTooShortError, check_timing, encode_ppm)
from washsim.control import LoadSize, WashState
from washsim.vga import (DEFAULT_TIMING, frame_color_stream,
                         frame_sync_tables, hud_raster)

FRAME = DEFAULT_TIMING.frame_clocks


def stream(state=WashState.IDLE, load=LoadSize.MEDIUM, door=False,
           frames=2.2, offset=0):
    """(colors, hsync, vsync) for a held screen, starting at scan phase
    `offset`, covering `frames` frame periods."""
    colors = frame_color_stream(state, load, door)
    hs, vs, act = frame_sync_tables()
    n = int(frames * FRAME)
    idx = (np.arange(offset, offset + n)) % FRAME
    return colors[idx], hs[idx], vs[idx]


def multi_stream(screens):
    """Concatenated whole frames, one per (state, load, door) screen."""
    hs, vs, _ = frame_sync_tables()
    colors = np.concatenate([frame_color_stream(*s) for s in screens])
    return colors, np.tile(hs, len(screens)), np.tile(vs, len(screens))


# ---------------------------------------------------------------- capture

def test_two_frames_emit_one():
    cap = FrameCapture()
    frames = cap.feed(*stream(frames=2.0))
    assert len(frames) == 1
    assert frames[0].seq == 0


def test_all_black_frame():
    cap = FrameCapture()
    frames = cap.feed(*stream(WashState.IDLE, LoadSize.SMALL, frames=2.2))
    img = frames[0].pixels.reshape(480, 640)
    # IDLE paints a black status band; indicator band is not black
    assert not img[:320].any()
    assert np.array_equal(
        img, hud_raster(WashState.IDLE, LoadSize.SMALL, False))


def test_spin_screen_status_band_white():
    cap = FrameCapture()
    frames = cap.feed(*stream(WashState.SPIN, LoadSize.LARGE, frames=2.2))
    img = frames[-1].pixels.reshape(480, 640)
    assert (img[:320] == 7).all()
    assert np.array_equal(
        img, hud_raster(WashState.SPIN, LoadSize.LARGE, False))


@pytest.mark.parametrize("offset", [0, 17, 641, 392_000 - 1, 392_000 + 5,
                                    400_000, 415_999])
def test_capture_self_synchronizes_from_any_offset(offset):
    screens = [(WashState.FILL, LoadSize.SMALL, False),
               (WashState.WASH, LoadSize.MEDIUM, False),
               (WashState.SPIN, LoadSize.LARGE, False)]
    colors, hs, vs = multi_stream(screens)
    cap = FrameCapture()
    frames = cap.feed(colors[offset:], hs[offset:], vs[offset:])
    # capture locks at the first vsync fall it sees; every emitted frame
    # must then equal the screen of the stream frame it latched
    vfall0 = 490 * 800  # phase of the vsync fall within a frame
    first_lock = next(i for i in range(len(screens))
                      if i * FRAME + vfall0 >= offset)
    expected = [hud_raster(*screens[i + 1]).reshape(-1)
                for i in range(first_lock, len(screens) - 1)]
    assert len(frames) == len(expected)
    for frame, want in zip(frames, expected):
        assert np.array_equal(frame.pixels, want)


def test_scalar_step_equals_batch_feed():
    rng = random.Random(404)
    colors, hs, vs = stream(WashState.DRAIN, LoadSize.LARGE, frames=2.3,
                            offset=137)
    a, b = FrameCapture(), FrameCapture()
    got_a = []
    for i in range(len(colors)):
        f = a.step(int(colors[i]), bool(hs[i]), bool(vs[i]))
        if f is not None:
            got_a.append(f)
    got_b, at = [], 0
    while at < len(colors):
        n = rng.choice((1, 3, 137, 800, 5_000, 100_000))
        got_b.extend(b.feed(colors[at:at + n], hs[at:at + n], vs[at:at + n]))
        at += n
    assert a.snapshot() == b.snapshot()
    # two vsync falls in 2.3 frames: first locks, second emits
    assert len(got_a) == len(got_b) == 1
    for fa, fb in zip(got_a, got_b):
        assert fa.seq == fb.seq and fa.same_image(fb)


def test_desync_detected_on_short_line():
    colors, hs, vs = stream(frames=2.0)
    # drop one clock shortly after the first vsync fall (mid-capture)
    cut = 490 * 800 + 3 * 800 + 20
    colors, hs, vs = (np.delete(a, cut) for a in (colors, hs, vs))
    cap = FrameCapture()
    with pytest.raises(DesyncError):
        cap.feed(colors, hs, vs)


def test_no_desync_before_lock():
    colors, hs, vs = stream(frames=1.0)
    cut = 5 * 800 + 20  # long before the first vsync fall
    colors, hs, vs = (np.delete(a, cut) for a in (colors, hs, vs))
    FrameCapture().feed(colors, hs, vs)  # must not raise


# ------------------------------------------------------------ conformance

def clean_trace(frames=3.2):
    hs, vs, act = frame_sync_tables()
    n = int(frames * FRAME)
    idx = np.arange(n) % FRAME
    return hs[idx], vs[idx], act[idx]


def test_check_timing_passes_on_generated_trace():
    hs, vs, act = clean_trace()
    report = check_timing(hs, vs, act)
    assert report.passed
    assert report.violations == []
    assert report.clocks_per_line == 800
    assert report.hsync_pulse_clocks == 96
    assert report.lines_per_frame == 521
    assert report.vsync_pulse_lines == 2
    assert report.active_samples == 307_200


def test_check_timing_short_line_violation():
    hs, vs, act = clean_trace()
    cut = 490 * 800 + 10 * 800 + 100
    hs, vs, act = (np.delete(a, cut) for a in (hs, vs, act))
    report = check_timing(hs, vs, act)
    assert not report.passed
    assert ("clocks_per_line", 799, 800) in report.violations


def test_check_timing_widened_pulse_violation():
    hs, vs, act = clean_trace()
    hs = hs.copy()
    # widen one pulse by pulling its trailing edge one clock later
    line0 = 490 * 800 + 5 * 800
    assert not hs[line0 + 751] and hs[line0 + 752]
    hs[line0 + 752] = False
    report = check_timing(hs, vs, act)
    assert not report.passed
    assert ("hsync_pulse_clocks", 97, 96) in report.violations


def test_check_timing_trace_too_short():
    hs, vs, act = clean_trace(frames=0.8)
    with pytest.raises(TraceTooShortError):
        check_timing(hs, vs, act)


def test_check_timing_max_frames_limits_measurement():
    hs, vs, act = clean_trace(frames=4.5)
    report = check_timing(hs, vs, act, max_frames=2)
    assert report.passed
    assert report.measurements["frames_measured"] == 2


# ------------------------------------------------------------------- ppm

def test_ppm_1x1_white():
    f = Frame(np.array([7], dtype=np.uint8), 0, width=1, height=1)
    assert encode_ppm(f) == b"P6\n1 1\n255\n\xff\xff\xff"


def test_ppm_1x1_magenta():
    f = Frame(np.array([5], dtype=np.uint8), 0, width=1, height=1)
    assert encode_ppm(f) == b"P6\n1 1\n255\n\xff\x00\xff"


def test_ppm_full_frame_header_and_determinism():
    img = hud_raster(WashState.DONE, LoadSize.MEDIUM, False).reshape(-1)
    f = Frame(img.copy(), 3)
    data = encode_ppm(f)
    assert data.startswith(b"P6\n640 480\n255\n")
    assert len(data) == 15 + 3 * 307_200
    assert data == encode_ppm(Frame(img.copy(), 9))  # seq not encoded


def test_ppm_injective_on_distinct_frames():
    a = hud_raster(WashState.FILL, LoadSize.MEDIUM, False).reshape(-1)
    b = hud_raster(WashState.WASH, LoadSize.MEDIUM, False).reshape(-1)
    assert encode_ppm(Frame(a, 0)) != encode_ppm(Frame(b, 0))
