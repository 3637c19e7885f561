"""Live front-panel server: newline-delimited JSON over a websocket.

Client to server:  {"t":"input","name":"BTN_START","value":true}
                   {"t":"rotary","dir":"cw"}
Server to client:  {"t":"status","state":..,"load":..,"leds":[8 bools],
                    "buzzer":..,"door_open":..,"cycle":..}
                   {"t":"frame","seq":N,"runs":[[count,color0-7],..]}
                   {"t":"error","error":"..."}

The simulation advances in wall-clock-paced batches (30 per second); client
inputs are applied at the next batch boundary, at an exact recorded cycle,
and every applied pin event is kept in an input log that replays as a
stimulus file to the identical trace.  One client per session; a session's
machine is fresh on connect and discarded on disconnect.
"""

import asyncio
import json
import time
from bisect import insort

import numpy as np
import websockets

from .control import MASTER_HZ
from .machine import Machine
from .runner import advance
from .stimulus import SIGNALS, StimulusEvent, expand_rotary

BATCHES_PER_SECOND = 30


def rle_encode(pixels: np.ndarray) -> list:
    """Lossless run-length encoding of a frame's palette codes."""
    change = np.flatnonzero(np.diff(pixels)) + 1
    bounds = np.concatenate(([0], change, [len(pixels)]))
    values = pixels[bounds[:-1]]
    return [[int(n), int(v)] for n, v in zip(np.diff(bounds), values)]


class LiveSession:
    """One connected panel: a fresh machine plus its input log."""

    def __init__(self, config) -> None:
        self.config = config
        self.machine = Machine(config, retain_frames=False,
                               on_frame=self._on_frame)
        self.input_log: list[StimulusEvent] = []
        self._pending: list[StimulusEvent] = []
        self._pending_idx = 0
        self._frames_out = []
        self._next_free = {}  # per-signal first cycle not yet claimed
        self._status_sent = 0
        self.cycles_per_second = (config.serve_cycles_per_second
                                  if config.serve_cycles_per_second
                                  else MASTER_HZ)

    def _on_frame(self, frame) -> None:
        if frame.seq % self.config.frame_decimation == 0:
            self._frames_out.append(frame)

    def _schedule(self, event: StimulusEvent) -> None:
        insort(self._pending, event, key=lambda e: e.at_cycle)
        self.input_log.append(event)
        self._next_free[event.signal] = event.at_cycle + 1

    def apply_client_message(self, data) -> str | None:
        """Schedule the message's pin events; returns error text or None.

        Events for one signal are serialized to distinct cycles so the log
        stays free of same-cycle conflicts and replays verbatim.
        """
        if not isinstance(data, dict):
            return "message must be a JSON object"
        kind = data.get("t")
        now = self.machine.cycle
        if kind == "input":
            name = data.get("name")
            value = data.get("value")
            if name not in SIGNALS:
                return f"unknown signal {name!r}"
            if not isinstance(value, bool):
                return "value must be true or false"
            at = max(now, self._next_free.get(name, 0))
            self._schedule(StimulusEvent(at, name, value))
            return None
        if kind == "rotary":
            direction = data.get("dir")
            if direction not in ("cw", "ccw"):
                return "dir must be \"cw\" or \"ccw\""
            base = max(now, self._next_free.get("ROT_A", 0),
                       self._next_free.get("ROT_B", 0))
            for ev in expand_rotary(base, direction == "cw",
                                    self.config.rotary_gap_cycles):
                self._schedule(ev)
            return None
        return f"unknown message type {kind!r}"

    def advance_batch(self) -> None:
        target = self.machine.cycle + max(
            1, self.cycles_per_second // BATCHES_PER_SECOND)
        self._pending_idx = advance(self.machine, target, self._pending,
                                    self._pending_idx)

    # -- wire helpers ----------------------------------------------------

    @staticmethod
    def status_message(entry) -> dict:
        cycle, state, load, leds, buzzer, door_open = entry
        return {"t": "status", "state": state, "load": load,
                "leds": [bool(x) for x in leds], "buzzer": bool(buzzer),
                "door_open": bool(door_open), "cycle": cycle}

    def take_status_messages(self) -> list[dict]:
        trace = self.machine.status_trace
        out = [self.status_message(e) for e in trace[self._status_sent:]]
        self._status_sent = len(trace)
        return out

    def take_frame_messages(self) -> list[dict]:
        frames, self._frames_out = self._frames_out, []
        return [{"t": "frame", "seq": f.seq, "runs": rle_encode(f.pixels)}
                for f in frames]

    async def run(self, ws) -> None:
        inbox: asyncio.Queue = asyncio.Queue()
        closed = asyncio.Event()

        async def reader():
            try:
                async for raw in ws:
                    await inbox.put(raw)
            except websockets.ConnectionClosed:
                pass
            finally:
                closed.set()

        reader_task = asyncio.create_task(reader())
        period = 1.0 / BATCHES_PER_SECOND
        deadline = time.monotonic() + period
        try:
            for msg in self.take_status_messages():
                await _send(ws, msg)
            while not closed.is_set():
                while True:
                    try:
                        raw = inbox.get_nowait()
                    except asyncio.QueueEmpty:
                        break
                    try:
                        data = json.loads(raw)
                    except (json.JSONDecodeError, UnicodeDecodeError):
                        await _send(ws, {"t": "error", "error": "not valid JSON"})
                        continue
                    err = self.apply_client_message(data)
                    if err is not None:
                        await _send(ws, {"t": "error", "error": err})
                self.advance_batch()
                for msg in self.take_status_messages():
                    await _send(ws, msg)
                for msg in self.take_frame_messages():
                    await _send(ws, msg)
                now = time.monotonic()
                wait = deadline - now
                deadline = deadline + period if wait > 0 else now + period
                await asyncio.sleep(wait if wait > 0 else 0)
        except websockets.ConnectionClosed:
            pass
        finally:
            reader_task.cancel()


async def _send(ws, message: dict) -> None:
    await ws.send(json.dumps(message) + "\n")


class PanelServer:
    """Accepts one live session at a time; keeps finished sessions for
    inspection (their input logs replay as stimulus files)."""

    def __init__(self, config) -> None:
        self.config = config
        self.sessions: list[LiveSession] = []
        self._active = None

    async def handle(self, ws) -> None:
        if self._active is not None:
            await _send(ws, {"t": "error", "error": "another panel is connected"})
            await ws.close()
            return
        session = LiveSession(self.config)
        self.sessions.append(session)
        self._active = session
        try:
            await session.run(ws)
        finally:
            self._active = None


async def serve_forever(config, host: str, port: int) -> None:
    server = PanelServer(config)
    async with websockets.serve(server.handle, host, port):
        print(f"washsim front panel listening on ws://{host}:{port}")
        await asyncio.Future()


def serve(config, host: str = "localhost", port: int | None = None) -> None:
    asyncio.run(serve_forever(config, host,
                              port if port is not None else config.serve_port))
