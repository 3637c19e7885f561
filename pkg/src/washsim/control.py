"""Wash-cycle state machine, load selection, stage timers, outputs.

The controller is a ten-state FSM on a 4-bit register.  SPIN must encode
as 0111 and HOLD as 1000 because the door gate decodes those values; the
rest of the sequence fills the encoding space in cycle order.

Timers count whole ticks (1 tick = one second of simulated wash time,
scaled by the configured time_scale) in 32-bit counters with a master
cycle prescaler.  HOLD freezes the prescaler and counter exactly, so spin
time is conserved across door openings.
"""

import enum


class WashState(enum.IntEnum):
    IDLE = 0b0000
    FILL = 0b0001
    WASH = 0b0010
    DRAIN = 0b0011
    RINSE_FILL = 0b0100
    RINSE_AGITATE = 0b0101
    RINSE_DRAIN = 0b0110
    SPIN = 0b0111
    HOLD = 0b1000
    DONE = 0b1001


class LoadSize(enum.IntEnum):
    SMALL = 0
    MEDIUM = 1
    LARGE = 2


# Successor on timer_done.  IDLE and HOLD have no timer transition.
NEXT_ON_TIMER = {
    WashState.FILL: WashState.WASH,
    WashState.WASH: WashState.DRAIN,
    WashState.DRAIN: WashState.RINSE_FILL,
    WashState.RINSE_FILL: WashState.RINSE_AGITATE,
    WashState.RINSE_AGITATE: WashState.RINSE_DRAIN,
    WashState.RINSE_DRAIN: WashState.SPIN,
    WashState.SPIN: WashState.DONE,
    WashState.DONE: WashState.IDLE,
}

# Stages whose durations vary with load size.
TIMED_STAGES = (
    WashState.FILL,
    WashState.WASH,
    WashState.DRAIN,
    WashState.RINSE_FILL,
    WashState.RINSE_AGITATE,
    WashState.RINSE_DRAIN,
    WashState.SPIN,
)

# Default stage durations in seconds (ticks), per load size.
DEFAULT_DURATIONS = {
    WashState.FILL: (10, 15, 20),
    WashState.WASH: (20, 30, 40),
    WashState.DRAIN: (8, 10, 12),
    WashState.RINSE_FILL: (10, 15, 20),
    WashState.RINSE_AGITATE: (10, 15, 20),
    WashState.RINSE_DRAIN: (8, 10, 12),
    WashState.SPIN: (15, 20, 25),
}
DONE_TICKS = 2  # completion chime window, load-independent

MASTER_HZ = 50_000_000
BUZZER_HALF_PERIOD = 25_000  # master cycles; 1 kHz square at 50 MHz
U32_MAX = 0xFFFF_FFFF


class DurationTable:
    """Per-(stage, load) tick counts plus the tick prescaler period."""

    __slots__ = ("ticks", "done_ticks", "tick_period", "time_scale")

    def __init__(self, durations=None, done_ticks: int = DONE_TICKS,
                 time_scale: int = 1) -> None:
        if time_scale < 1 or MASTER_HZ % time_scale != 0:
            raise ValueError(
                "time_scale must be a positive divisor of 50,000,000")
        self.time_scale = time_scale
        self.tick_period = MASTER_HZ // time_scale
        src = durations if durations is not None else DEFAULT_DURATIONS
        self.ticks = {}
        for stage in TIMED_STAGES:
            per_load = src[stage]
            for load in LoadSize:
                t = int(per_load[load])
                if t < 1:
                    raise ValueError(
                        f"duration for {stage.name}/{load.name} must be >= 1 tick")
                if t > U32_MAX:
                    raise ValueError(
                        f"duration for {stage.name}/{load.name} exceeds 32 bits")
                self.ticks[(stage, load)] = t
        if done_ticks < 1 or done_ticks > U32_MAX:
            raise ValueError("done window must be 1..2^32-1 ticks")
        self.done_ticks = done_ticks

    def target_for(self, state: WashState, load: LoadSize) -> int:
        if state == WashState.DONE:
            return self.done_ticks
        return self.ticks.get((state, load), 0)


class StageTimer:
    """32-bit tick counter with a master-cycle prescaler.

    ``step(running)`` is called once per master cycle; while running the
    prescaler counts up to tick_period and rolls the counter.  ``done`` is
    a level (counter at target while running), so a transition blocked by
    higher-priority events still fires once the block clears.
    """

    __slots__ = ("counter", "target", "prescaler", "tick_period")

    def __init__(self, tick_period: int) -> None:
        self.counter = 0
        self.target = 0
        self.prescaler = 0
        self.tick_period = tick_period

    def rearm(self, target: int) -> None:
        self.counter = 0
        self.prescaler = 0
        self.target = target

    def step(self, running: bool) -> bool:
        if not running:
            return False
        self.prescaler += 1
        if self.prescaler >= self.tick_period:
            self.prescaler = 0
            if self.counter < self.target:
                self.counter += 1
        return self.counter >= self.target

    def cycles_until_done(self) -> int:
        """Remaining step calls before done first reads true (0 if already
        done).  Only meaningful while running."""
        if self.counter >= self.target:
            return 0
        return (self.target - self.counter) * self.tick_period - self.prescaler


def timer_running(state: WashState) -> bool:
    return state not in (WashState.IDLE, WashState.HOLD)


def fsm_step(start_pulse: bool, reset_pulse: bool, door_open: bool,
             timer_done: bool, state: WashState) -> WashState:
    """One transition evaluation.  Priority: reset > door > timer > start."""
    if reset_pulse:
        return WashState.IDLE
    if state == WashState.SPIN and door_open:
        return WashState.HOLD
    if state == WashState.HOLD:
        if not door_open:
            return WashState.SPIN
        return state
    if timer_done and state in NEXT_ON_TIMER:
        return NEXT_ON_TIMER[state]
    if state == WashState.IDLE and start_pulse:
        return WashState.FILL
    return state


def select_load(rotary_event: bool, direction: bool, state: WashState,
                load: LoadSize) -> LoadSize:
    """Knob moves the load size only in IDLE; clockwise (direction=0)
    increments, saturating at both ends."""
    if not rotary_event or state != WashState.IDLE:
        return load
    if direction:
        return LoadSize(max(int(load) - 1, int(LoadSize.SMALL)))
    return LoadSize(min(int(load) + 1, int(LoadSize.LARGE)))


class ActuatorOutputs:
    __slots__ = ("valve", "agitate_motor", "pump", "spin_motor", "door_lock",
                 "buzzer", "leds")

    def __init__(self, valve, agitate_motor, pump, spin_motor, door_lock,
                 buzzer, leds) -> None:
        self.valve = valve
        self.agitate_motor = agitate_motor
        self.pump = pump
        self.spin_motor = spin_motor
        self.door_lock = door_lock
        self.buzzer = buzzer
        self.leds = leds


def derive_outputs(state: WashState, load: LoadSize,
                   buzzer_phase: int) -> ActuatorOutputs:
    """Combinational output decode.

    buzzer_phase counts master cycles since DONE was entered; the buzzer
    plays a 1 kHz square wave for the whole DONE window.  LEDs 0..4 mirror
    valve/agitator/pump/spin/lock, LEDs 5..7 one-hot the load size.
    """
    valve = state in (WashState.FILL, WashState.RINSE_FILL)
    agitate = state in (WashState.WASH, WashState.RINSE_AGITATE)
    pump = state in (WashState.DRAIN, WashState.RINSE_DRAIN)
    spin = state == WashState.SPIN
    lock = state not in (WashState.IDLE, WashState.HOLD, WashState.DONE)
    buzzer = (state == WashState.DONE
              and (buzzer_phase // BUZZER_HALF_PERIOD) % 2 == 0)
    leds = (valve, agitate, pump, spin, lock,
            load == LoadSize.SMALL, load == LoadSize.MEDIUM,
            load == LoadSize.LARGE)
    return ActuatorOutputs(valve, agitate, pump, spin, lock, buzzer, leds)
