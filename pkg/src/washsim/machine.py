"""The composed washing-machine controller simulation.

One Machine owns every register in the design and advances on the 50 MHz
master clock.  Per master cycle the order is: synchronizers, debouncers,
edge detectors, rotary filter, stage timer, FSM and load registers; then,
on pixel-enable cycles only, the door gate, sync generator, HUD pixel and
frame capture.  The FSM therefore reads the door-gate register as updated
by the previous pixel step, and the gate reads the FSM state updated this
cycle, mirroring the registered module boundaries of the hardware.

Two advance paths exist and are kept bit-equivalent:

* ``step()`` - the scalar reference, one master cycle at a time.
* ``advance_bulk(n)`` - used while the machine is quiescent (all inputs
  settled, no transition within reach): registers with closed-form
  evolution are fast-forwarded and the pixel pipeline is replayed from a
  cached per-(state, load, door) color stream through the same capture.

``quiescent()`` + ``horizon()`` tell the driver when and how far the bulk
path is safe; everything else (stimulus edges, debounce flips, timer
expiry, FSM transitions) is stepped scalar.
"""

import numpy as np

from .clocking import TwoFlopSync, pixel_enables_in
from .conditioning import Debouncer, RotaryFilter, EdgeDetector, DoorGate
from .control import (WashState, LoadSize, StageTimer, fsm_step, select_load,
                      derive_outputs, timer_running)
from .vga import (ScanPosition, DEFAULT_TIMING, sync_outputs, hud_pixel,
                  frame_sync_tables, frame_color_stream, BLACK)
from .capture import FrameCapture

FRAME_CLOCKS = DEFAULT_TIMING.frame_clocks
H_TOTAL = DEFAULT_TIMING.h_total

# spans shorter than this are cheaper to step scalar
MIN_BULK_SPAN = 64
# pixel samples per capture feed call (bounds fancy-index memory)
MAX_FEED_CHUNK = 1 << 20

_SYNC_TABLES = None


def shared_sync_tables():
    global _SYNC_TABLES
    if _SYNC_TABLES is None:
        _SYNC_TABLES = frame_sync_tables(DEFAULT_TIMING)
    return _SYNC_TABLES


class Machine:
    def __init__(self, config=None, on_frame=None, retain_frames=True,
                 collect_sync=False):
        from .config import RunConfig
        self.config = config if config is not None else RunConfig()
        self.table = self.config.duration_table()

        self.cycle = 0
        self.raw_btn_start = False
        self.raw_btn_reset = False
        self.raw_sw_door = False
        self.raw_rot_a = False
        self.raw_rot_b = False

        self.sync_start = TwoFlopSync()
        self.sync_reset = TwoFlopSync()
        self.sync_door = TwoFlopSync()
        self.sync_rot_a = TwoFlopSync()
        self.sync_rot_b = TwoFlopSync()
        d, p = self.config.debounce_depth, self.config.debounce_period
        self.db_start = Debouncer(d, p)
        self.db_reset = Debouncer(d, p)
        self.db_door = Debouncer(d, p)
        self.edge_start = EdgeDetector()
        self.edge_reset = EdgeDetector()
        self.rotary = RotaryFilter()
        self.gate = DoorGate()

        self.state = WashState.IDLE
        self.load = LoadSize.MEDIUM
        self.timer = StageTimer(self.table.tick_period)
        self.done_entry_cycle = 0

        self.pos = ScanPosition()
        self.capture = FrameCapture()

        self.on_frame = on_frame
        self.retain_frames = retain_frames
        self.frames = []
        self.frame_count = 0
        self.transitions = []
        self.status_trace = []
        self._status_key = (self.state, self.load)
        self.status_trace.append((0, *self._status_entry()))

        self._collect_sync = collect_sync
        self._sync_buf = []
        self._sync_chunks = []
        self._stream_cache = {}

    # -- inputs ----------------------------------------------------------

    _INPUT_ATTRS = {"BTN_START": "raw_btn_start", "BTN_RESET": "raw_btn_reset",
                    "SW_DOOR": "raw_sw_door", "ROT_A": "raw_rot_a",
                    "ROT_B": "raw_rot_b"}

    def set_input(self, name: str, value: bool) -> None:
        setattr(self, self._INPUT_ATTRS[name], bool(value))

    # -- observation ------------------------------------------------------

    def buzzer_phase(self) -> int:
        return self.cycle - self.done_entry_cycle

    def outputs(self):
        return derive_outputs(self.state, self.load, self.buzzer_phase())

    def _status_entry(self):
        out = self.outputs()
        return (self.state.name, self.load.name, out.leds, out.buzzer,
                self.gate.block)

    def snapshot(self):
        """Every register, for bit-exact equivalence checks."""
        syncs = tuple((s.stage1, s.stage2) for s in
                      (self.sync_start, self.sync_reset, self.sync_door,
                       self.sync_rot_a, self.sync_rot_b))
        dbs = tuple((db.shift, db.stable, db.divider) for db in
                    (self.db_start, self.db_reset, self.db_door))
        rot = (self.rotary.sync, self.rotary.q1, self.rotary.q2,
               self.rotary.delay_q1)
        return (self.cycle, int(self.state), int(self.load),
                self.raw_btn_start, self.raw_btn_reset, self.raw_sw_door,
                self.raw_rot_a, self.raw_rot_b, syncs, dbs,
                self.edge_start.prev, self.edge_reset.prev, rot,
                self.gate.block, self.timer.counter, self.timer.target,
                self.timer.prescaler, self.done_entry_cycle,
                self.pos.hcount, self.pos.vcount, self.capture.snapshot())

    # -- scalar reference path --------------------------------------------

    def step(self) -> None:
        t = self.cycle

        s_start = self.sync_start.step(self.raw_btn_start)
        s_reset = self.sync_reset.step(self.raw_btn_reset)
        s_door = self.sync_door.step(self.raw_sw_door)
        s_a = self.sync_rot_a.step(self.raw_rot_a)
        s_b = self.sync_rot_b.step(self.raw_rot_b)
        db_start, _ = self.db_start.step(s_start)
        db_reset, _ = self.db_reset.step(s_reset)
        db_door, _ = self.db_door.step(s_door)
        start_pulse = self.edge_start.step(db_start)
        reset_pulse = self.edge_reset.step(db_reset)
        rot_event, rot_dir = self.rotary.step(s_a, s_b)

        done = self.timer.step(timer_running(self.state))
        new_load = select_load(rot_event, rot_dir, self.state, self.load)
        if reset_pulse:
            new_load = LoadSize.MEDIUM
        new_state = fsm_step(start_pulse, reset_pulse, self.gate.block, done,
                             self.state)
        if new_state is not self.state:
            # HOLD freezes the spin timer; resuming must not re-arm it
            entering_hold = new_state is WashState.HOLD
            resuming = self.state is WashState.HOLD and new_state is WashState.SPIN
            if not entering_hold and not resuming:
                self.timer.rearm(self.table.target_for(new_state, new_load))
            if new_state is WashState.DONE:
                self.done_entry_cycle = t
            self.state = new_state
            self.transitions.append((t, new_state))
        self.load = new_load

        if (t & 1) == 0:
            self.gate.step(db_door, self.raw_btn_start, int(self.state))
            pos = self.pos
            hs, vs, act = sync_outputs(pos.hcount, pos.vcount)
            if act:
                color = hud_pixel(pos.hcount, pos.vcount, self.state,
                                  self.load, self.gate.block)
            else:
                color = BLACK
            frame = self.capture.step(color, hs, vs)
            pos.advance()
            if frame is not None:
                self._emit(frame)
            if self._collect_sync:
                self._sync_buf.append((hs, vs, act))

        key = (self.state, self.load)
        if key != self._status_key:
            self._status_key = key
            self.status_trace.append((t, *self._status_entry()))
        self.cycle = t + 1

    # -- fast path ---------------------------------------------------------

    def quiescent(self) -> bool:
        """True when constant raw inputs make every per-cycle update
        predictable in closed form (no pulses, no transitions pending)."""
        if not (self.sync_start.settled(self.raw_btn_start)
                and self.sync_reset.settled(self.raw_btn_reset)
                and self.sync_door.settled(self.raw_sw_door)
                and self.sync_rot_a.settled(self.raw_rot_a)
                and self.sync_rot_b.settled(self.raw_rot_b)):
            return False
        if not self.rotary.settled(self.raw_rot_a, self.raw_rot_b):
            return False
        if (self.edge_start.prev != self.db_start.stable
                or self.edge_reset.prev != self.db_reset.stable):
            return False
        if self.gate.block != DoorGate.next_value(
                self.db_door.stable, self.raw_btn_start, int(self.state)):
            return False
        if self.state is WashState.SPIN and self.gate.block:
            return False
        if self.state is WashState.HOLD and not self.gate.block:
            return False
        return True

    def horizon(self):
        """Max cycles advance_bulk may cover from here (None = unbounded)."""
        bounds = []
        for db, raw in ((self.db_start, self.raw_btn_start),
                        (self.db_reset, self.raw_btn_reset),
                        (self.db_door, self.raw_sw_door)):
            c = db.cycles_before_change(raw)
            if c is not None:
                bounds.append(c)
        if timer_running(self.state):
            bounds.append(self.timer.cycles_until_done() - 1)
        return min(bounds) if bounds else None

    def advance_bulk(self, n: int) -> None:
        t = self.cycle
        self.db_start.advance(n, self.raw_btn_start)
        self.db_reset.advance(n, self.raw_btn_reset)
        self.db_door.advance(n, self.raw_sw_door)
        if timer_running(self.state):
            total = self.timer.prescaler + n
            ticks, self.timer.prescaler = divmod(total, self.timer.tick_period)
            self.timer.counter += ticks

        enables = pixel_enables_in(t, n)
        if enables:
            key = (self.state, self.load, self.gate.block)
            stream = self._stream_cache.get(key)
            if stream is None:
                stream = frame_color_stream(self.state, self.load,
                                            self.gate.block)
                self._stream_cache[key] = stream
            hs_t, vs_t, act_t = shared_sync_tables()
            q = self.pos.vcount * H_TOTAL + self.pos.hcount
            if self._collect_sync:
                self._flush_sync_buf()
            remaining = enables
            while remaining:
                chunk = min(remaining, MAX_FEED_CHUNK)
                idx = np.arange(q, q + chunk) % FRAME_CLOCKS
                hs, vs = hs_t[idx], vs_t[idx]
                for frame in self.capture.feed(stream[idx], hs, vs):
                    self._emit(frame)
                if self._collect_sync:
                    self._sync_chunks.append((hs, vs, act_t[idx]))
                q = (q + chunk) % FRAME_CLOCKS
                remaining -= chunk
            self.pos.vcount, self.pos.hcount = divmod(q, H_TOTAL)
        self.cycle = t + n

    # -- plumbing ----------------------------------------------------------

    def _emit(self, frame) -> None:
        self.frame_count += 1
        if self.retain_frames:
            self.frames.append(frame)
        if self.on_frame is not None:
            self.on_frame(frame)

    def _flush_sync_buf(self) -> None:
        if self._sync_buf:
            arr = np.array(self._sync_buf, dtype=bool)
            self._sync_chunks.append((arr[:, 0], arr[:, 1], arr[:, 2]))
            self._sync_buf.clear()

    def sync_trace(self):
        """(hsync, vsync, active) arrays over every pixel enable so far."""
        self._flush_sync_buf()
        if not self._sync_chunks:
            e = np.empty(0, dtype=bool)
            return e, e.copy(), e.copy()
        hs = np.concatenate([c[0] for c in self._sync_chunks])
        vs = np.concatenate([c[1] for c in self._sync_chunks])
        act = np.concatenate([c[2] for c in self._sync_chunks])
        return hs, vs, act
