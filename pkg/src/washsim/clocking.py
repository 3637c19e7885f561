"""Master clock and clock-domain plumbing.

The whole simulator advances on a single 50 MHz master clock (20 ns per
cycle, 64-bit cycle counter).  The 25 MHz pixel clock is not a second
free-running clock: it is an enable strobe asserted on every even master
cycle, which keeps the kernel a single deterministic step function while
preserving the exact 2:1 timing relationship.

Raw asynchronous inputs are brought into the master domain through a
conventional two-flop synchronizer, modelled as an exact two-cycle delay.
"""

MASTER_HZ = 50_000_000
MASTER_PERIOD_NS = 20
CYCLES_PER_PIXEL = 2


class MasterClock:
    """64-bit cycle counter with the 2:1 pixel-clock enable.

    ``tick()`` returns the pixel enable for the *current* cycle and then
    advances, so cycle 0 is a pixel cycle (phase fixed at reset).
    """

    __slots__ = ("master_cycle",)

    def __init__(self) -> None:
        self.master_cycle = 0

    def tick(self) -> bool:
        enable = (self.master_cycle & 1) == 0
        self.master_cycle += 1
        return enable

    @property
    def time_ns(self) -> int:
        return self.master_cycle * MASTER_PERIOD_NS


def pixel_enables_in(start_cycle: int, n_cycles: int) -> int:
    """Number of pixel-enable cycles in [start_cycle, start_cycle + n_cycles)."""
    if n_cycles <= 0:
        return 0
    first_even = start_cycle + (start_cycle & 1)
    last = start_cycle + n_cycles - 1
    if first_even > last:
        return 0
    return (last - first_even) // 2 + 1


class TwoFlopSync:
    """Two-register synchronizer: output is the input delayed by exactly
    two update steps.  Call once per master cycle."""

    __slots__ = ("stage1", "stage2")

    def __init__(self, reset_value: bool = False) -> None:
        self.stage1 = reset_value
        self.stage2 = reset_value

    def step(self, raw: bool) -> bool:
        stable = self.stage2
        self.stage2 = self.stage1
        self.stage1 = raw
        return stable

    def settled(self, raw: bool) -> bool:
        """True when a constant ``raw`` can no longer change the output."""
        return self.stage1 == raw and self.stage2 == raw
