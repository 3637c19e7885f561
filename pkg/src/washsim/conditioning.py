"""Input conditioning: debouncing, rotary decoding, edges, door gating.

Everything here is a per-cycle register-transfer step function.  Each class
owns its registers and exposes ``step(...)`` which consumes this cycle's
inputs and returns this cycle's outputs, exactly like the synchronous
always-blocks it models.

The debouncer additionally exposes a closed-form fast-forward
(``advance``/``cycles_before_change``) used by the simulation kernel to
skip long quiescent stretches without losing bit-exactness; equivalence
with the per-cycle path is covered by property tests.
"""

# Wash FSM encodings the door gate is hard-wired to (4-bit state register).
SPIN_CODE = 0b0111
HOLD_CODE = 0b1000


class Debouncer:
    """Shift-register debouncer.

    A raw level is sampled every ``period`` master cycles into a
    ``depth``-bit shift register; the debounced output flips only when all
    ``depth`` bits agree on the new value.  Defaults (16 samples taken at
    1 ms) give a 16 ms settle, standard practice for mechanical switches.
    """

    __slots__ = ("depth", "period", "shift", "stable", "divider", "_mask")

    def __init__(self, depth: int = 16, period: int = 50_000) -> None:
        if depth < 1:
            raise ValueError("debounce depth must be >= 1")
        if period < 1:
            raise ValueError("debounce sample period must be >= 1")
        self.depth = depth
        self.period = period
        self._mask = (1 << depth) - 1
        self.shift = 0
        self.stable = False
        self.divider = 0  # samples on the cycle divider hits 0

    def step(self, raw: bool) -> tuple[bool, bool]:
        """One master cycle.  Returns (stable, changed)."""
        changed = False
        if self.divider == 0:
            self.shift = ((self.shift << 1) | (1 if raw else 0)) & self._mask
            if self.shift == self._mask and not self.stable:
                self.stable = True
                changed = True
            elif self.shift == 0 and self.stable:
                self.stable = False
                changed = True
            self.divider = self.period - 1
        else:
            self.divider -= 1
        return self.stable, changed

    # -- fast-forward support -------------------------------------------

    def _trailing_agreeing(self, value: bool) -> int:
        """Newest consecutive samples already equal to ``value``."""
        bits = self.shift if value else (~self.shift & self._mask)
        n = 0
        while n < self.depth and (bits >> n) & 1:
            n += 1
        return n

    def cycles_before_change(self, raw: bool) -> int | None:
        """Cycles that can elapse before ``stable`` could flip, with ``raw``
        held constant.  None means it can never flip."""
        if self.stable == raw:
            return None
        need = self.depth - self._trailing_agreeing(raw)
        # flip lands on the sampling step `need` samples from now
        return self.divider + (need - 1) * self.period

    def advance(self, n: int, raw: bool) -> None:
        """Fast-forward ``n`` cycles of constant ``raw``.

        Caller must guarantee no flip occurs inside the span (bound by
        ``cycles_before_change``); ``changed`` is never asserted inside.
        """
        if n <= 0:
            return
        d = self.divider
        if n <= d:
            samples = 0
        else:
            samples = (n - 1 - d) // self.period + 1
        self.divider = (d - n) % self.period
        if samples >= self.depth:
            self.shift = self._mask if raw else 0
        elif samples:
            fill = ((1 << samples) - 1) if raw else 0
            self.shift = ((self.shift << samples) | fill) & self._mask


class RotaryFilter:
    """Quadrature decoder with detent filtering.

    Per-cycle case decode of the registered {b, a} sample pair: 00 disarms
    (clears q1), 11 marks detent arrival (sets q1), and the intermediate
    states 01/10 record which way the knob travelled (q2).  A one-cycle
    event pulse fires on the rising edge of q1, so jitter that re-enters
    intermediate states cannot produce extra events without passing 00
    again.  direction=False is the clockwise sense (load increment).
    """

    __slots__ = ("sync", "q1", "q2", "delay_q1")

    def __init__(self) -> None:
        self.sync = 0  # registered {b, a}
        self.q1 = False
        self.q2 = False
        self.delay_q1 = False

    def step(self, rot_a: bool, rot_b: bool) -> tuple[bool, bool]:
        """One master cycle on synchronized inputs.  Returns
        (rotary_event, direction)."""
        old_q1 = self.q1
        sample = self.sync
        if sample == 0b00:
            self.q1 = False
        elif sample == 0b01:
            self.q2 = False
        elif sample == 0b10:
            self.q2 = True
        else:
            self.q1 = True
        self.delay_q1 = old_q1
        self.sync = ((1 if rot_b else 0) << 1) | (1 if rot_a else 0)
        return self.q1 and not self.delay_q1, self.q2

    def settled(self, rot_a: bool, rot_b: bool) -> bool:
        """True when a constant input can no longer change any register or
        raise an event."""
        sample = ((1 if rot_b else 0) << 1) | (1 if rot_a else 0)
        if self.sync != sample:
            return False
        if self.delay_q1 != self.q1:
            return False
        if sample == 0b00:
            return not self.q1
        if sample == 0b01:
            return not self.q2
        if sample == 0b10:
            return self.q2
        return self.q1


class EdgeDetector:
    """One-cycle pulse on a rising edge of an already-clean level."""

    __slots__ = ("prev",)

    def __init__(self) -> None:
        self.prev = False

    def step(self, level: bool) -> bool:
        pulse = level and not self.prev
        self.prev = level
        return pulse

    def settled(self, level: bool) -> bool:
        return self.prev == level


class DoorGate:
    """SPIN/HOLD-only door gate.

    The gated register may reflect the (synchronized, debounced) door
    switch only while the wash FSM is in SPIN or HOLD; a pressed start
    button forces it low.  Clocked at the pixel-enable rate.
    """

    __slots__ = ("block",)

    def __init__(self) -> None:
        self.block = False

    @staticmethod
    def next_value(sw3_sync: bool, btn_start_raw: bool, washing_state: int) -> bool:
        if btn_start_raw:
            return False
        if washing_state == SPIN_CODE or washing_state == HOLD_CODE:
            return sw3_sync
        return False

    def step(self, sw3_sync: bool, btn_start_raw: bool, washing_state: int) -> bool:
        self.block = self.next_value(sw3_sync, btn_start_raw, washing_state)
        return self.block
