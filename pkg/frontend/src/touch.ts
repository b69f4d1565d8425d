// Pointer-to-touch synthesis. Every UI gesture emits the one canonical
// height profile (approach, three contact frames, retreat), so console
// input exercises exactly the same classifier path as scripted sessions:
// the profile satisfies the backend's two-frame debounce at 2 mm, exits
// above 4 mm, and each tap lasts ~30 ms.

export type Finger = "left_index" | "right_index";

export interface TouchFramePayload {
  kind: "touch";
  finger: Finger;
  x: number;
  y: number;
  height: number;
  confidence: number;
}

export interface TimedFrame {
  t: number;
  payload: TouchFramePayload;
}

const PROFILE_HEIGHTS = [8.0, 5.0, 1.0, 1.0, 1.0, 8.0];
const STEP_MS = 10;
export const TAP_PROFILE_MS = (PROFILE_HEIGHTS.length - 1) * STEP_MS;

export class TouchSynth {
  finger: Finger = "left_index";
  private cursor = 0; // timestamps must be strictly increasing per finger

  constructor(private now: () => number) {}

  toggleFinger(): Finger {
    this.finger = this.finger === "left_index" ? "right_index" : "left_index";
    return this.finger;
  }

  private stamp(at: number): number {
    this.cursor = Math.max(this.cursor + STEP_MS, at);
    return this.cursor;
  }

  private frames(x: number, y: number, heights: number[], start: number): TimedFrame[] {
    const out: TimedFrame[] = [];
    let t = start;
    for (const height of heights) {
      out.push({
        t,
        payload: { kind: "touch", finger: this.finger, x, y, height, confidence: 1.0 },
      });
      t = this.stamp(t + STEP_MS);
    }
    return out;
  }

  /** One compliant tap profile at a cell position. */
  tap(x: number, y: number): TimedFrame[] {
    return this.frames(x, y, PROFILE_HEIGHTS, this.stamp(this.now()));
  }

  /** Two tap profiles 100 ms apart: classified as a double tap upstream. */
  doubleTap(x: number, y: number): TimedFrame[] {
    const first = this.tap(x, y);
    const gapStart = this.stamp(first[first.length - 1].t + 100);
    return first.concat(this.frames(x, y, PROFILE_HEIGHTS, gapStart));
  }

  /** Exploratory drag: stay in contact across cells, never tap-shaped. */
  drag(path: [number, number][]): TimedFrame[] {
    if (path.length === 0) return [];
    const [x0, y0] = path[0];
    const out = this.frames(x0, y0, [8.0, 1.0, 1.0], this.stamp(this.now()));
    let t = this.stamp(out[out.length - 1].t + 60);
    for (const [x, y] of path.slice(1)) {
      out.push({
        t,
        payload: { kind: "touch", finger: this.finger, x, y, height: 1.0, confidence: 1.0 },
      });
      t = this.stamp(t + 60); // too slow and too long to be a tap
    }
    const [xn, yn] = path[path.length - 1];
    out.push({
      t,
      payload: { kind: "touch", finger: this.finger, x: xn, y: yn, height: 8.0, confidence: 1.0 },
    });
    return out;
  }
}
