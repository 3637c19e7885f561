// Pure panel state reduction: every incoming server line produces the next
// state.  The rendered frame is always the last fully decoded one; a bad
// message never clobbers it, it only raises the warning.

import {
  decodeRuns,
  parseServerMessage,
  StatusMessage,
} from "./protocol.js";

export type Connection = "connecting" | "open" | "closed";

export interface PanelState {
  connection: Connection;
  status: StatusMessage | null;
  frame: Uint8Array | null;
  frameSeq: number;
  warning: string | null;
}

export function initialPanelState(): PanelState {
  return {
    connection: "connecting",
    status: null,
    frame: null,
    frameSeq: -1,
    warning: null,
  };
}

export function setConnection(state: PanelState, c: Connection): PanelState {
  return { ...state, connection: c };
}

export function applyServerLine(state: PanelState, line: string): PanelState {
  const msg = parseServerMessage(line);
  if (msg === null) {
    return { ...state, warning: "unreadable message from simulator" };
  }
  switch (msg.t) {
    case "status":
      return { ...state, status: msg };
    case "frame": {
      const pixels = decodeRuns(msg.runs);
      if (pixels === null) {
        return { ...state, warning: `frame ${msg.seq} malformed, kept previous` };
      }
      return { ...state, frame: pixels, frameSeq: msg.seq, warning: null };
    }
    case "error":
      return { ...state, warning: msg.error };
  }
}
