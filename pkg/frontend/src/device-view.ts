// Live mirror of the simulated pin display. State derives purely from
// device/frame envelopes; reloading reproduces the same view from the
// next frame. Pulsing cells animate locally at the commanded rate.

import {
  FramePayload,
  GRID_HEIGHT,
  GRID_WIDTH,
  decodeBase64,
  markerAt,
  pinAt,
} from "./protocol.js";

export interface DeviceState {
  frameId: number;
  pins: Uint8Array;
  semantic: Uint8Array;
  braille: number[];
  braillePage: number;
  braillePages: number;
  emptyViewport: boolean;
  receivedAt: number; // performance.now() when the envelope landed
  appliedAt: number; // when the view finished updating
}

export function brailleCellText(cell: number): string {
  // unicode braille block: dot i of our mask maps straight onto bit i
  return String.fromCharCode(0x2800 + (cell & 0x3f));
}

export class DeviceView {
  state: DeviceState | null = null;
  pulsing = new Map<string, number>(); // "col,row" -> rate Hz
  private cells: HTMLElement[][] = [];
  private brailleLine: HTMLElement | null = null;
  private status: HTMLElement | null = null;

  constructor(
    private document: Document,
    private now: () => number = () => Date.now(),
  ) {}

  /** Build the 60x40 cell grid plus the Braille line. Cell elements carry
   * data-col/data-row so pointer handlers never need pixel math. */
  mount(root: HTMLElement): void {
    const grid = this.document.createElement("div");
    grid.className = "pin-grid";
    grid.setAttribute("role", "img");
    grid.setAttribute("aria-label", "simulated pin display");
    for (let row = 0; row < GRID_HEIGHT; row++) {
      const rowCells: HTMLElement[] = [];
      const rowElement = this.document.createElement("div");
      rowElement.className = "pin-row";
      for (let col = 0; col < GRID_WIDTH; col++) {
        const cell = this.document.createElement("span");
        cell.className = "pin";
        cell.dataset.col = String(col);
        cell.dataset.row = String(row);
        rowElement.appendChild(cell);
        rowCells.push(cell);
      }
      grid.appendChild(rowElement);
      this.cells.push(rowCells);
    }
    root.appendChild(grid);
    this.brailleLine = this.document.createElement("div");
    this.brailleLine.className = "braille-line";
    root.appendChild(this.brailleLine);
    this.status = this.document.createElement("div");
    this.status.className = "device-status";
    root.appendChild(this.status);
  }

  applyFrame(payload: FramePayload, receivedAt?: number): DeviceState {
    const arrived = receivedAt ?? this.now();
    const pins = decodeBase64(payload.pins);
    const semantic = decodeBase64(payload.semantic);
    for (let row = 0; row < GRID_HEIGHT; row++) {
      for (let col = 0; col < GRID_WIDTH; col++) {
        const cell = this.cells[row]?.[col];
        if (!cell) continue;
        const raised = pinAt(pins, col, row);
        const marker = markerAt(semantic, col, row);
        cell.className = `pin ${raised ? "raised" : "lowered"} marker-${marker}`;
        cell.title = `(${col}, ${row}) ${marker}`; // semantic marker on hover
      }
    }
    if (this.brailleLine) {
      this.brailleLine.textContent =
        payload.braille.map(brailleCellText).join("") +
        `  [page ${payload.braille_page + 1}/${Math.max(1, payload.braille_pages)}]`;
    }
    if (this.status) {
      this.status.textContent = payload.empty_viewport
        ? `frame ${payload.frame_id}: empty viewport`
        : `frame ${payload.frame_id}`;
    }
    this.pulsing.clear();
    this.state = {
      frameId: payload.frame_id,
      pins,
      semantic,
      braille: payload.braille,
      braillePage: payload.braille_page,
      braillePages: payload.braille_pages,
      emptyViewport: payload.empty_viewport,
      receivedAt: arrived,
      appliedAt: this.now(),
    };
    return this.state;
  }

  /** Playback highlights pulse locally until the next frame or clear. */
  startPulse(cells: [number, number][], rateHz: number): void {
    for (const [col, row] of cells) {
      this.pulsing.set(`${col},${row}`, rateHz);
      const cell = this.cells[row]?.[col];
      if (cell) {
        cell.classList.add("pulsing");
        cell.style.animationDuration = `${1000 / rateHz}ms`;
      }
    }
  }

  clearPulse(): void {
    for (const key of this.pulsing.keys()) {
      const [col, row] = key.split(",").map(Number);
      this.cells[row]?.[col]?.classList.remove("pulsing");
    }
    this.pulsing.clear();
  }

  cellAt(col: number, row: number): HTMLElement | null {
    return this.cells[row]?.[col] ?? null;
  }

  pin(col: number, row: number): boolean {
    return this.state ? pinAt(this.state.pins, col, row) : false;
  }

  marker(col: number, row: number): string {
    return this.state ? markerAt(this.state.semantic, col, row) : "background";
  }

  /** Data-point cells from the semantic map, left to right. */
  dataCells(): [number, number][] {
    if (!this.state) return [];
    const out: [number, number][] = [];
    for (let col = 0; col < GRID_WIDTH; col++) {
      for (let row = 0; row < GRID_HEIGHT; row++) {
        if (this.marker(col, row) === "data_point") out.push([col, row]);
      }
    }
    return out;
  }
}
