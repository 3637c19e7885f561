"""Run configuration: flat JSON file, validated into a RunConfig.

Every key is optional; omitted keys take the documented defaults.  Stage
durations are given in seconds of simulated wash time (= timer ticks) as
duration_<stage>_<size>, e.g. duration_spin_large.  time_scale divides
the 50,000,000-cycle tick so tests can compress a wash into thousands of
cycles without touching any other semantics.
"""

import json
from dataclasses import dataclass, field

from .control import (WashState, LoadSize, DurationTable, DEFAULT_DURATIONS,
                      DONE_TICKS, MASTER_HZ, TIMED_STAGES)
from .stimulus import DEFAULT_ROTARY_GAP

STAGE_KEYS = {
    WashState.FILL: "fill",
    WashState.WASH: "wash",
    WashState.DRAIN: "drain",
    WashState.RINSE_FILL: "rinse_fill",
    WashState.RINSE_AGITATE: "rinse_agitate",
    WashState.RINSE_DRAIN: "rinse_drain",
    WashState.SPIN: "spin",
}
SIZE_KEYS = {LoadSize.SMALL: "small", LoadSize.MEDIUM: "medium",
             LoadSize.LARGE: "large"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    time_scale: int = 1
    debounce_depth: int = 16
    debounce_period: int = 50_000
    rotary_gap_cycles: int = DEFAULT_ROTARY_GAP
    frames_dir: str | None = None
    run_cycles: int | None = None
    serve_port: int = 8765
    frame_decimation: int = 2
    # wall-clock pacing for serve(); None means real time (50 MHz)
    serve_cycles_per_second: int | None = None
    durations: dict = field(default_factory=lambda: dict(DEFAULT_DURATIONS))
    done_ticks: int = DONE_TICKS

    def duration_table(self) -> DurationTable:
        return DurationTable(self.durations, self.done_ticks, self.time_scale)

    def validate(self) -> "RunConfig":
        if self.time_scale < 1 or MASTER_HZ % self.time_scale != 0:
            raise ConfigError(
                "time_scale must be a positive integer divisor of 50,000,000")
        if self.debounce_depth < 1:
            raise ConfigError("debounce_depth must be >= 1")
        if self.debounce_period < 1:
            raise ConfigError("debounce_period must be >= 1")
        if self.rotary_gap_cycles < 1:
            raise ConfigError("rotary_gap_cycles must be >= 1")
        if self.frame_decimation < 1:
            raise ConfigError("frame_decimation must be >= 1")
        if self.serve_cycles_per_second is not None and self.serve_cycles_per_second < 1:
            raise ConfigError("serve_cycles_per_second must be >= 1")
        try:
            self.duration_table()
        except ValueError as e:
            raise ConfigError(str(e)) from None
        return self


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    cfg = RunConfig()
    known = {"time_scale", "debounce_depth", "debounce_period",
             "rotary_gap_cycles", "frames_dir", "run_cycles", "serve_port",
             "frame_decimation", "serve_cycles_per_second", "duration_done"}
    duration_keys = {}
    for stage, sname in STAGE_KEYS.items():
        for load, lname in SIZE_KEYS.items():
            duration_keys[f"duration_{sname}_{lname}"] = (stage, load)

    durations = {stage: list(DEFAULT_DURATIONS[stage]) for stage in TIMED_STAGES}
    for key, value in data.items():
        if key in duration_keys:
            stage, load = duration_keys[key]
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"{key} must be an integer tick count")
            durations[stage][int(load)] = value
        elif key == "duration_done":
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError("duration_done must be an integer tick count")
            cfg.done_ticks = value
        elif key in known:
            setattr(cfg, key, value)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    for key in ("time_scale", "debounce_depth", "debounce_period",
                "rotary_gap_cycles", "serve_port", "frame_decimation"):
        v = getattr(cfg, key)
        if not isinstance(v, int) or isinstance(v, bool):
            raise ConfigError(f"{key} must be an integer")
    for key in ("run_cycles", "serve_cycles_per_second"):
        v = getattr(cfg, key)
        if v is not None and (not isinstance(v, int) or isinstance(v, bool)):
            raise ConfigError(f"{key} must be an integer or null")
    if cfg.frames_dir is not None and not isinstance(cfg.frames_dir, str):
        raise ConfigError("frames_dir must be a string path")
    cfg.durations = {stage: tuple(v) for stage, v in durations.items()}
    return cfg.validate()


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from None
    return config_from_dict(data)
