// Scripted panel session for round-trip testing: connect, pick a large
// load, start a wash, pause it by opening the door mid-spin, close the
// door, and ride it to DONE.  Emits a JSON record of every status message
// and the hash of every frame as it would be painted.
//
//   node dist/headless.js ws://localhost:8765
//
// The hashes are over the RGBA bytes produced by the same palette code the
// browser canvas uses, so they are comparable against reference screens.

import WebSocket, { RawData } from "ws";

import { buttonPress, doorToggle, knobDetent, RELEASE_MS } from "./gestures.js";
import { fnv1aHex, toRgba } from "./palette.js";
import {
  ClientMessage,
  decodeRuns,
  encodeClientMessage,
  parseServerMessage,
  StatusMessage,
} from "./protocol.js";

const url = process.argv[2] ?? "ws://localhost:8765";
const SESSION_TIMEOUT_MS = 60_000;

interface FrameRecord {
  seq: number;
  hash: string;
}

const statuses: StatusMessage[] = [];
const frames: FrameRecord[] = [];
const problems: string[] = [];

const ws = new WebSocket(url);
let notify: (() => void) | null = null;

ws.on("message", (raw: RawData) => {
  const msg = parseServerMessage(String(raw));
  if (msg === null) {
    problems.push(`unparseable server line: ${String(raw).slice(0, 80)}`);
  } else if (msg.t === "status") {
    statuses.push(msg);
  } else if (msg.t === "frame") {
    const pixels = decodeRuns(msg.runs);
    if (pixels === null) {
      problems.push(`frame ${msg.seq} failed validation`);
    } else {
      frames.push({ seq: msg.seq, hash: fnv1aHex(toRgba(pixels)) });
    }
  } else {
    problems.push(`server error: ${msg.error}`);
  }
  if (notify) {
    notify();
  }
});

function send(msg: ClientMessage): void {
  ws.send(encodeClientMessage(msg));
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function waitFor(
  what: string,
  pred: () => boolean,
  timeoutMs = 20_000,
): Promise<void> {
  const start = Date.now();
  while (!pred()) {
    if (Date.now() - start > timeoutMs) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise<void>((resolve) => {
      notify = resolve;
      setTimeout(resolve, 250);
    });
    notify = null;
  }
}

function lastState(): string {
  return statuses.length ? statuses[statuses.length - 1].state : "";
}

function framesSeen(): number {
  return frames.length;
}

async function waitFrames(n: number): Promise<void> {
  const target = framesSeen() + n;
  await waitFor(`${n} more frame(s)`, () => framesSeen() >= target);
}

async function script(): Promise<void> {
  await waitFor("socket open", () => ws.readyState === WebSocket.OPEN);
  await waitFor("initial status", () => lastState() === "IDLE");
  await waitFrames(2); // a settled idle screen

  send(knobDetent("cw"));
  await waitFor("load LARGE", () =>
    statuses.some((s) => s.load === "LARGE"),
  );

  const [down, up] = buttonPress("BTN_START");
  send(down);
  await sleep(RELEASE_MS);
  send(up);

  await waitFor("SPIN", () => lastState() === "SPIN");
  await waitFrames(2); // guarantee one pure spin screen
  send(doorToggle(true));
  await waitFor("HOLD", () => lastState() === "HOLD");
  await waitFrames(2); // guarantee one pure hold screen
  send(doorToggle(false));
  await waitFor("DONE", () => statuses.some((s) => s.state === "DONE"));
  await waitFor("return to IDLE", () => lastState() === "IDLE");
}

const killer = setTimeout(() => {
  problems.push("session timeout");
  finish(2);
}, SESSION_TIMEOUT_MS);

function finish(code: number): void {
  clearTimeout(killer);
  try {
    ws.close();
  } catch {
    // already closed
  }
  process.stdout.write(
    JSON.stringify({ statuses, frames, problems }) + "\n",
  );
  process.exit(code);
}

script()
  .then(() => finish(problems.length ? 2 : 0))
  .catch((err) => {
    problems.push(String(err));
    finish(2);
  });
