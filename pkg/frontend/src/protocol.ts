// Wire protocol shared with the simulator: newline-delimited JSON text
// frames over a websocket.  Parsing is strict; anything malformed returns
// null so the caller can keep the previous good state and raise a warning.

export const FRAME_WIDTH = 640;
export const FRAME_HEIGHT = 480;
export const FRAME_PIXELS = FRAME_WIDTH * FRAME_HEIGHT;

export const SIGNALS = [
  "BTN_START",
  "BTN_RESET",
  "SW_DOOR",
  "ROT_A",
  "ROT_B",
] as const;
export type SignalName = (typeof SIGNALS)[number];

export interface StatusMessage {
  t: "status";
  state: string;
  load: string;
  leds: boolean[]; // valve, agitate, pump, spin, lock, small, medium, large
  buzzer: boolean;
  door_open: boolean;
  cycle: number;
}

export type Run = [count: number, color: number];

export interface FrameMessage {
  t: "frame";
  seq: number;
  runs: Run[];
}

export interface ErrorMessage {
  t: "error";
  error: string;
}

export type ServerMessage = StatusMessage | FrameMessage | ErrorMessage;

export type ClientMessage =
  | { t: "input"; name: SignalName; value: boolean }
  | { t: "rotary"; dir: "cw" | "ccw" };

function isInt(x: unknown): x is number {
  return typeof x === "number" && Number.isInteger(x);
}

function isRun(x: unknown): x is Run {
  return (
    Array.isArray(x) &&
    x.length === 2 &&
    isInt(x[0]) &&
    x[0] > 0 &&
    isInt(x[1]) &&
    x[1] >= 0 &&
    x[1] <= 7
  );
}

/** Parse one server line; null for anything that is not a valid message. */
export function parseServerMessage(text: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    return null;
  }
  const msg = data as Record<string, unknown>;
  switch (msg.t) {
    case "status": {
      const leds = msg.leds;
      if (
        typeof msg.state !== "string" ||
        typeof msg.load !== "string" ||
        !Array.isArray(leds) ||
        leds.length !== 8 ||
        !leds.every((x) => typeof x === "boolean") ||
        typeof msg.buzzer !== "boolean" ||
        typeof msg.door_open !== "boolean" ||
        !isInt(msg.cycle)
      ) {
        return null;
      }
      return msg as unknown as StatusMessage;
    }
    case "frame": {
      if (!isInt(msg.seq) || msg.seq < 0 || !Array.isArray(msg.runs)) {
        return null;
      }
      return msg as unknown as FrameMessage;
    }
    case "error": {
      return typeof msg.error === "string"
        ? (msg as unknown as ErrorMessage)
        : null;
    }
    default:
      return null;
  }
}

/**
 * Decode a frame message's RLE runs to palette codes.  The runs must sum
 * to exactly one full frame; a frame that does not is rejected whole (the
 * panel never paints a partial image).
 */
export function decodeRuns(runs: unknown): Uint8Array | null {
  if (!Array.isArray(runs)) {
    return null;
  }
  let total = 0;
  for (const run of runs) {
    if (!isRun(run)) {
      return null;
    }
    total += run[0];
    if (total > FRAME_PIXELS) {
      return null;
    }
  }
  if (total !== FRAME_PIXELS) {
    return null;
  }
  const pixels = new Uint8Array(FRAME_PIXELS);
  let at = 0;
  for (const [count, color] of runs as Run[]) {
    pixels.fill(color, at, at + count);
    at += count;
  }
  return pixels;
}

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg) + "\n";
}
