// Speech transcript and response-chunk state. Lines accumulate from
// session/event speech envelopes; agent/response envelopes carry the
// chunk structure used for navigation display.

import { Envelope, ResponseChunk, ResponsePayload } from "./protocol.js";

export interface TranscriptLine {
  t: number;
  text: string;
  kind: "speech" | "selection" | "miss" | "query" | "info";
}

export class Transcript {
  lines: TranscriptLine[] = [];
  chunks: ResponseChunk[] = [];
  currentChunk = -1;
  lastResponse: ResponsePayload | null = null;
  private list: HTMLElement | null = null;
  private chunkLabel: HTMLElement | null = null;

  constructor(private document: Document) {}

  mount(root: HTMLElement): void {
    this.list = this.document.createElement("ul");
    this.list.className = "transcript";
    this.list.setAttribute("aria-live", "polite");
    root.appendChild(this.list);
    this.chunkLabel = this.document.createElement("div");
    this.chunkLabel.className = "chunk-state";
    root.appendChild(this.chunkLabel);
  }

  private add(line: TranscriptLine): void {
    this.lines.push(line);
    if (this.list) {
      const item = this.document.createElement("li");
      item.className = `line-${line.kind}`;
      item.textContent = line.text;
      this.list.appendChild(item);
    }
  }

  feed(envelope: Envelope): void {
    const payload = envelope.payload as Record<string, unknown>;
    if (envelope.topic === "agent/response") {
      const response = payload as unknown as ResponsePayload;
      this.lastResponse = response;
      this.chunks = response.chunks ?? [];
      this.currentChunk = this.chunks.length ? 0 : -1;
      this.renderChunkState();
      return;
    }
    if (envelope.topic !== "session/event") return;
    const kind = payload.kind as string;
    if (kind === "speech") {
      this.add({ t: envelope.t, text: String(payload.text), kind: "speech" });
    } else if (kind === "selection") {
      this.add({
        t: envelope.t,
        text: `selected ${payload.label} (${payload.finger})`,
        kind: "selection",
      });
    } else if (kind === "miss") {
      this.add({ t: envelope.t, text: "double tap hit no element", kind: "miss" });
    } else if (kind === "query") {
      this.add({ t: envelope.t, text: `> ${payload.text}`, kind: "query" });
    } else if (kind === "playback_speech") {
      this.currentChunk = Number(payload.chunk ?? this.currentChunk);
      this.renderChunkState();
    } else if (kind === "playback_clear") {
      this.currentChunk = -1;
      this.renderChunkState();
    } else if (kind === "chart_loaded") {
      this.add({ t: envelope.t, text: `chart loaded: ${payload.name}`, kind: "info" });
    }
  }

  private renderChunkState(): void {
    if (!this.chunkLabel) return;
    if (this.currentChunk < 0 || !this.chunks.length) {
      this.chunkLabel.textContent = "";
      return;
    }
    const chunk = this.chunks[this.currentChunk];
    this.chunkLabel.textContent =
      `chunk ${this.currentChunk + 1}/${this.chunks.length}: ${chunk?.text ?? ""}`;
  }

  speechText(): string {
    return this.lines
      .filter((line) => line.kind === "speech")
      .map((line) => line.text)
      .join(" ");
  }
}
