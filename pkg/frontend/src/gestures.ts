// Panel widget gestures mapped to wire messages.  Buttons are momentary
// (press and release are separate messages, RELEASE_MS apart); the door
// is a level; one knob detent is one rotary message.

import { ClientMessage } from "./protocol.js";

export const RELEASE_MS = 100;

export type ButtonName = "BTN_START" | "BTN_RESET";

export function buttonPress(name: ButtonName): [ClientMessage, ClientMessage] {
  return [
    { t: "input", name, value: true },
    { t: "input", name, value: false },
  ];
}

export function doorToggle(open: boolean): ClientMessage {
  return { t: "input", name: "SW_DOOR", value: open };
}

export function knobDetent(dir: "cw" | "ccw"): ClientMessage {
  return { t: "rotary", dir };
}
