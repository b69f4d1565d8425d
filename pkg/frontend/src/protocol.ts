// Envelope types and the line-delimited JSON codec shared with the bridge
// (schema: docs/wire.md in the repository root).

export interface Envelope {
  topic: string;
  seq: number;
  t: number;
  payload: Record<string, unknown>;
}

export interface CatalogueChart {
  name: string;
  title: string;
  mark: string;
  columns: { name: string; type: string }[];
  rows: number;
  digest: string;
  has_preview: boolean;
}

export interface FramePayload {
  frame_id: number;
  pins: string; // base64, 300 bytes, row-major, MSB first
  semantic: string; // base64, 2400 marker bytes
  braille: number[];
  braille_page: number;
  braille_pages: number;
  empty_viewport: boolean;
}

export interface ResponseChunk {
  index: number;
  text: string;
  elements: string[];
  cells: [number, number][];
}

export interface ResponsePayload {
  text: string;
  intent: string;
  confidence: number;
  word_count: number;
  chunks: ResponseChunk[];
}

export const GRID_WIDTH = 60;
export const GRID_HEIGHT = 40;

export const MARKER_NAMES = [
  "background",
  "x_axis",
  "y_axis",
  "data_point",
  "zero_line",
  "scroll_bar",
] as const;

export function encodeLine(envelope: Envelope): string {
  return JSON.stringify(envelope) + "\n";
}

export function makeEnvelope(
  topic: string,
  payload: Record<string, unknown>,
  t: number,
): Envelope {
  return { topic, seq: 0, t, payload };
}

/** Incremental splitter for newline-delimited JSON streams. */
export class LineDecoder {
  private buffer = "";

  push(chunk: string): Envelope[] {
    this.buffer += chunk;
    const out: Envelope[] = [];
    let index: number;
    while ((index = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, index).trim();
      this.buffer = this.buffer.slice(index + 1);
      if (!line) continue;
      try {
        out.push(JSON.parse(line) as Envelope);
      } catch {
        // a torn or foreign line must not kill the stream
      }
    }
    return out;
  }
}

export function decodeBase64(data: string): Uint8Array {
  const binary = atob(data);
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
  return bytes;
}

/** Pin state of one cell inside the packed 300-byte buffer. */
export function pinAt(pins: Uint8Array, col: number, row: number): boolean {
  const bit = row * GRID_WIDTH + col;
  return (pins[bit >> 3] & (0x80 >> (bit & 7))) !== 0;
}

export function markerAt(semantic: Uint8Array, col: number, row: number): string {
  return MARKER_NAMES[semantic[row * GRID_WIDTH + col]] ?? "background";
}
