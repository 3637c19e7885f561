// Browser wiring: one websocket, one canvas, a handful of widgets.

import { buttonPress, ButtonName, doorToggle, knobDetent, RELEASE_MS } from "./gestures.js";
import { ClientMessage, encodeClientMessage } from "./protocol.js";
import { applyServerLine, initialPanelState, PanelState, setConnection } from "./panelState.js";
import { paintFrame } from "./render.js";

const LED_LABELS = ["VALVE", "AGITATE", "PUMP", "SPIN", "LOCK", "S", "M", "L"];

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function defaultUrl(): string {
  const params = new URLSearchParams(location.search);
  return params.get("url") ?? "ws://localhost:8765";
}

class Panel {
  private state: PanelState = initialPanelState();
  private ws: WebSocket | null = null;
  private ctx: CanvasRenderingContext2D;
  private leds: HTMLElement[] = [];

  constructor() {
    const canvas = byId<HTMLCanvasElement>("screen");
    const ctx = canvas.getContext("2d");
    if (!ctx) {
      throw new Error("canvas 2d context unavailable");
    }
    this.ctx = ctx;

    const strip = byId<HTMLElement>("leds");
    for (const label of LED_LABELS) {
      const cell = document.createElement("div");
      cell.className = "led";
      const dot = document.createElement("span");
      dot.className = "dot";
      cell.append(dot, label);
      strip.append(cell);
      this.leds.push(dot);
    }

    byId<HTMLButtonElement>("btn-start").onclick = () => this.press("BTN_START");
    byId<HTMLButtonElement>("btn-reset").onclick = () => this.press("BTN_RESET");
    byId<HTMLButtonElement>("knob-ccw").onclick = () => this.send(knobDetent("ccw"));
    byId<HTMLButtonElement>("knob-cw").onclick = () => this.send(knobDetent("cw"));
    byId<HTMLInputElement>("door").onchange = (ev) => {
      this.send(doorToggle((ev.target as HTMLInputElement).checked));
    };

    this.connect();
  }

  private connect(): void {
    const ws = new WebSocket(defaultUrl());
    this.ws = ws;
    ws.onopen = () => this.update(setConnection(this.state, "open"));
    ws.onclose = () => this.update(setConnection(this.state, "closed"));
    ws.onerror = () => this.update(setConnection(this.state, "closed"));
    ws.onmessage = (ev) => {
      this.update(applyServerLine(this.state, String(ev.data)));
    };
  }

  private send(msg: ClientMessage): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(encodeClientMessage(msg));
    }
  }

  private press(name: ButtonName): void {
    const [down, up] = buttonPress(name);
    this.send(down);
    setTimeout(() => this.send(up), RELEASE_MS);
  }

  private update(next: PanelState): void {
    const prev = this.state;
    this.state = next;
    if (next.frame && next.frame !== prev.frame) {
      paintFrame(this.ctx, next.frame);
    }
    this.paintReadouts();
  }

  private paintReadouts(): void {
    const s = this.state;
    byId<HTMLElement>("conn").textContent = s.connection;
    byId<HTMLElement>("conn").dataset.state = s.connection;
    byId<HTMLElement>("warning").textContent = s.warning ?? "";
    const status = s.status;
    byId<HTMLElement>("state").textContent = status ? status.state : "-";
    byId<HTMLElement>("load").textContent = status ? status.load : "-";
    byId<HTMLElement>("cycle").textContent = status
      ? status.cycle.toLocaleString()
      : "-";
    byId<HTMLElement>("buzzer").classList.toggle(
      "on",
      Boolean(status && status.buzzer),
    );
    byId<HTMLElement>("doorlock").classList.toggle(
      "on",
      Boolean(status && status.leds[4]),
    );
    this.leds.forEach((dot, i) => {
      dot.classList.toggle("on", Boolean(status && status.leds[i]));
    });
  }
}

new Panel();
