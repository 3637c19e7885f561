"""VGA sync generation and HUD rendering (640x480 at a 25 MHz pixel clock).

Geometry per line: 640 active, 16 front porch, 96 sync, 48 back porch
(800 clocks); per frame: 480 active lines, 10 front porch, 2 sync, 29 back
porch (521 lines, 416,800 clocks per frame).  Both syncs are active-low.
Counters start at the first visible pixel, so (0, 0) is the first active
sample after reset.

Colors are 3-bit palette codes, index = r*4 + g*2 + b.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .control import WashState, LoadSize

# Palette codes (Figure-less but fixed: index = r*4 + g*2 + b)
BLACK = 0
BLUE = 1
GREEN = 2
CYAN = 3
RED = 4
MAGENTA = 5
YELLOW = 6
WHITE = 7

PALETTE_RGB = tuple(
    (255 * (c >> 2 & 1), 255 * (c >> 1 & 1), 255 * (c & 1)) for c in range(8)
)

STATE_COLORS = {
    WashState.IDLE: BLACK,
    WashState.FILL: BLUE,
    WashState.WASH: CYAN,
    WashState.DRAIN: YELLOW,
    WashState.RINSE_FILL: BLUE,
    WashState.RINSE_AGITATE: GREEN,
    WashState.RINSE_DRAIN: YELLOW,
    WashState.SPIN: WHITE,
    WashState.HOLD: RED,
    WashState.DONE: MAGENTA,
}

# HUD layout (rows are vcount, columns are hcount)
STATUS_ROWS = range(0, 320)
INDICATOR_ROWS = range(360, 440)
LOAD_BLOCK_W = 80
LOAD_BLOCK_STRIDE = 120
LOAD_BLOCK_X0 = 40
DOOR_COLS = range(480, 560)


@dataclass(frozen=True)
class TimingParams:
    h_display: int = 640
    h_front_porch: int = 16
    h_pulse: int = 96
    h_back_porch: int = 48
    v_display: int = 480
    v_front_porch: int = 10
    v_pulse: int = 2
    v_back_porch: int = 29

    @property
    def h_total(self) -> int:
        return self.h_display + self.h_front_porch + self.h_pulse + self.h_back_porch

    @property
    def v_total(self) -> int:
        return self.v_display + self.v_front_porch + self.v_pulse + self.v_back_porch

    @property
    def frame_clocks(self) -> int:
        return self.h_total * self.v_total


DEFAULT_TIMING = TimingParams()


class VgaSample(NamedTuple):
    color: int  # palette code 0..7; BLACK whenever not active
    hsync: bool
    vsync: bool
    active: bool


class ScanPosition:
    """Live horizontal/vertical pixel counters, advanced per pixel clock."""

    __slots__ = ("hcount", "vcount", "_h_total", "_v_total")

    def __init__(self, params: TimingParams = DEFAULT_TIMING) -> None:
        self.hcount = 0
        self.vcount = 0
        self._h_total = params.h_total
        self._v_total = params.v_total

    def advance(self) -> None:
        self.hcount += 1
        if self.hcount == self._h_total:
            self.hcount = 0
            self.vcount += 1
            if self.vcount == self._v_total:
                self.vcount = 0


def sync_outputs(hcount: int, vcount: int,
                 params: TimingParams = DEFAULT_TIMING) -> tuple[bool, bool, bool]:
    """(hsync, vsync, active) at the given counters; syncs active-low."""
    hs_lo = params.h_display + params.h_front_porch
    vs_lo = params.v_display + params.v_front_porch
    hsync = not (hs_lo <= hcount < hs_lo + params.h_pulse)
    vsync = not (vs_lo <= vcount < vs_lo + params.v_pulse)
    active = hcount < params.h_display and vcount < params.v_display
    return hsync, vsync, active


def hud_pixel(hcount: int, vcount: int, state: WashState, load: LoadSize,
              door_open: bool) -> int:
    """HUD color at an active position.

    Status band rows 0..319 in the state color; load blocks (rows 360..439,
    three 80-wide blocks starting at x=40 on a 120 stride) light white up
    to the selected size; door indicator (same rows, x 480..559) red when
    open, green when closed.  Everything else black.
    """
    if vcount < 320:
        return STATE_COLORS[state]
    if 360 <= vcount < 440:
        if LOAD_BLOCK_X0 <= hcount < LOAD_BLOCK_X0 + 3 * LOAD_BLOCK_STRIDE:
            offset = hcount - LOAD_BLOCK_X0
            if offset % LOAD_BLOCK_STRIDE < LOAD_BLOCK_W:
                block = offset // LOAD_BLOCK_STRIDE
                return WHITE if block <= int(load) else BLACK
            return BLACK
        if 480 <= hcount < 560:
            return RED if door_open else GREEN
    return BLACK


def hud_raster(state: WashState, load: LoadSize, door_open: bool) -> np.ndarray:
    """Full 480x640 HUD image as palette codes (row-major, uint8)."""
    img = np.zeros((480, 640), dtype=np.uint8)
    img[0:320, :] = STATE_COLORS[state]
    for block in range(3):
        if block <= int(load):
            x0 = LOAD_BLOCK_X0 + block * LOAD_BLOCK_STRIDE
            img[360:440, x0:x0 + LOAD_BLOCK_W] = WHITE
    img[360:440, 480:560] = RED if door_open else GREEN
    return img


def frame_sync_tables(params: TimingParams = DEFAULT_TIMING):
    """Per-clock (hsync, vsync, active) over one whole frame.

    Index is the linear scan phase q = vcount * h_total + hcount; the
    tables let the bulk pixel pipeline look sync levels up instead of
    recomputing them per sample.
    """
    h = np.arange(params.h_total)
    v = np.arange(params.v_total)
    hs_lo = params.h_display + params.h_front_porch
    vs_lo = params.v_display + params.v_front_porch
    hsync_line = ~((h >= hs_lo) & (h < hs_lo + params.h_pulse))
    vsync_col = ~((v >= vs_lo) & (v < vs_lo + params.v_pulse))
    active_line = h < params.h_display
    active_col = v < params.v_display
    hsync = np.tile(hsync_line, params.v_total)
    vsync = np.repeat(vsync_col, params.h_total)
    active = np.repeat(active_col, params.h_total) & np.tile(active_line, params.v_total)
    return hsync, vsync, active


def frame_color_stream(state: WashState, load: LoadSize, door_open: bool,
                       params: TimingParams = DEFAULT_TIMING) -> np.ndarray:
    """Palette code per pixel clock over one whole frame (blanking black)."""
    grid = np.zeros((params.v_total, params.h_total), dtype=np.uint8)
    grid[:480, :640] = hud_raster(state, load, door_open)
    return grid.reshape(-1)
