// The operator console: a pure client over bridge envelopes. It mirrors
// the device, synthesizes touch from pointer gestures on the grid,
// exposes the six buttons with real press timing, and sends typed queries
// with whatever touch context the session already holds.

import { ButtonName, BUTTONS, ButtonPanel, TimedEdge } from "./buttons.js";
import { BridgeConnection, ConnectionState } from "./connection.js";
import { DeviceView } from "./device-view.js";
import {
  CatalogueChart,
  Envelope,
  FramePayload,
  makeEnvelope,
} from "./protocol.js";
import { TimedFrame, TouchSynth } from "./touch.js";
import { Transcript } from "./transcript.js";

export interface ConsoleApp {
  deviceView: DeviceView;
  transcript: Transcript;
  touch: TouchSynth;
  buttons: ButtonPanel;
  catalogue: CatalogueChart[];
  connectionState: ConnectionState;
  sendQuery(text: string): void;
  pressButton(button: ButtonName, durationMs: number): void;
  comboButtons(a: ButtonName, b: ButtonName): void;
  loadChart(name: string): void;
  root: HTMLElement;
}

export function createConsole(
  document: Document,
  root: HTMLElement,
  connection: BridgeConnection,
  now: () => number = () => Date.now(),
): ConsoleApp {
  const deviceView = new DeviceView(document, now);
  const transcript = new Transcript(document);
  const touch = new TouchSynth(now);
  const buttons = new ButtonPanel(now);

  const banner = document.createElement("div");
  banner.className = "banner hidden";
  banner.textContent = "bridge connection lost, reconnecting…";
  root.appendChild(banner);

  const deviceRoot = document.createElement("section");
  deviceRoot.className = "device";
  root.appendChild(deviceRoot);
  deviceView.mount(deviceRoot);

  const controls = document.createElement("section");
  controls.className = "controls";
  root.appendChild(controls);

  const fingerToggle = document.createElement("button");
  fingerToggle.className = "finger-toggle";
  fingerToggle.textContent = "finger: left_index";
  fingerToggle.addEventListener("click", () => {
    fingerToggle.textContent = `finger: ${touch.toggleFinger()}`;
  });
  controls.appendChild(fingerToggle);

  const buttonElements = new Map<ButtonName, HTMLElement>();
  for (const name of BUTTONS) {
    const element = document.createElement("button");
    element.className = "device-button";
    element.dataset.button = name;
    element.textContent = name;
    element.addEventListener("pointerdown", () => sendEdge(buttons.press(name)));
    element.addEventListener("pointerup", () => sendEdge(buttons.release(name)));
    controls.appendChild(element);
    buttonElements.set(name, element);
  }

  const form = document.createElement("form");
  form.className = "query-form";
  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = "ask about the chart…";
  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "ask";
  form.appendChild(input);
  form.appendChild(submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (input.value.trim()) {
      app.sendQuery(input.value.trim());
      input.value = "";
    }
  });
  controls.appendChild(form);

  const transcriptRoot = document.createElement("section");
  transcriptRoot.className = "transcript-panel";
  root.appendChild(transcriptRoot);
  transcript.mount(transcriptRoot);

  // pointer gestures on the pin grid -> canonical touch profiles
  let activePath: [number, number][] | null = null;

  function cellOf(target: EventTarget | null): [number, number] | null {
    const element = target as HTMLElement | null;
    if (!element || element.dataset?.col === undefined) return null;
    return [Number(element.dataset.col), Number(element.dataset.row)];
  }

  deviceRoot.addEventListener("pointerdown", (event) => {
    const cell = cellOf(event.target);
    if (cell) activePath = [cell];
  });
  deviceRoot.addEventListener("pointerover", (event) => {
    if (!activePath) return;
    const cell = cellOf(event.target);
    if (!cell) return;
    const [lastCol, lastRow] = activePath[activePath.length - 1];
    if (cell[0] !== lastCol || cell[1] !== lastRow) activePath.push(cell);
  });
  deviceRoot.addEventListener("pointerup", (event) => {
    if (!activePath) return;
    const path = activePath;
    activePath = null;
    const up = cellOf(event.target);
    if (up && (up[0] !== path[path.length - 1][0] || up[1] !== path[path.length - 1][1])) {
      path.push(up);
    }
    const frames =
      path.length === 1
        ? touch.tap(path[0][0], path[0][1])
        : touch.drag(path);
    sendFrames(frames);
  });

  function sendFrames(frames: TimedFrame[]): void {
    for (const frame of frames) {
      connection.send(makeEnvelope("session/event", { ...frame.payload }, frame.t));
    }
  }

  function sendEdge(edge: TimedEdge | null): void {
    if (edge) connection.send(makeEnvelope("session/event", { ...edge.payload }, edge.t));
  }

  const app: ConsoleApp = {
    deviceView,
    transcript,
    touch,
    buttons,
    catalogue: [],
    connectionState: "connecting",
    root,
    sendQuery(text: string): void {
      connection.send(makeEnvelope("user/query", { text }, now()));
    },
    pressButton(button: ButtonName, durationMs: number): void {
      for (const edge of buttons.pressFor(button, durationMs)) sendEdge(edge);
    },
    comboButtons(a: ButtonName, b: ButtonName): void {
      for (const edge of buttons.combo(a, b)) sendEdge(edge);
    },
    loadChart(name: string): void {
      connection.send(makeEnvelope("session/event", { kind: "load_chart", name }, now()));
    },
  };

  connection.on("state", (state) => {
    app.connectionState = state;
    banner.className = state === "open" ? "banner hidden" : "banner";
  });

  connection.on("envelope", (envelope: Envelope) => {
    if (envelope.topic === "vis/catalogue") {
      app.catalogue = (envelope.payload.charts as CatalogueChart[]) ?? [];
    } else if (envelope.topic === "device/frame") {
      deviceView.applyFrame(envelope.payload as unknown as FramePayload, now());
    } else if (envelope.topic === "session/event") {
      const kind = envelope.payload.kind as string;
      if (kind === "playback_highlight" || kind === "highlight") {
        const cells = (envelope.payload.cells as [number, number][]) ?? [];
        deviceView.startPulse(cells, 2.0);
      } else if (kind === "playback_clear" || kind === "stopped") {
        deviceView.clearPulse();
      }
      transcript.feed(envelope);
    } else if (envelope.topic === "agent/response") {
      transcript.feed(envelope);
    }
  });

  return app;
}
