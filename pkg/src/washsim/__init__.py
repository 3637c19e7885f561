"""Cycle-accurate simulator of an FPGA washing-machine controller.

A single 50 MHz master clock drives input conditioning (two-flop
synchronizers, shift-register debouncing, quadrature rotary filtering),
a ten-state wash-cycle FSM with load-dependent 32-bit stage timers and
door safety gating, and a VESA 640x480 VGA HUD captured by a virtual
monitor for golden-frame testing.  A websocket server exposes a live
front panel speaking newline-delimited JSON.
"""

from .capture import (ConformanceReport, DesyncError, Frame, FrameCapture,
                      TraceTooShortError, check_timing, encode_ppm)
from .config import ConfigError, RunConfig, config_from_dict, load_config
from .control import LoadSize, WashState
from .machine import Machine
from .runner import RunResult, advance, conformance_cycles, run
from .stimulus import StimulusError, StimulusEvent, expand_rotary, parse_stimulus
from .vga import TimingParams, hud_pixel, hud_raster

__version__ = "0.1.0"

__all__ = [
    "ConformanceReport", "DesyncError", "Frame", "FrameCapture",
    "TraceTooShortError", "check_timing", "encode_ppm",
    "ConfigError", "RunConfig", "config_from_dict", "load_config",
    "LoadSize", "WashState", "Machine",
    "RunResult", "advance", "conformance_cycles", "run",
    "StimulusError", "StimulusEvent", "expand_rotary", "parse_stimulus",
    "TimingParams", "hud_pixel", "hud_raster",
    "__version__",
]
