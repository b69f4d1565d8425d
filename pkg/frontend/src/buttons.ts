// The six-button panel. Press/release emit timed down/up edges; the
// backend's three-state model (quick < 200 ms, hold at 500 ms, combos
// within 100 ms) works off these timestamps, so press-and-hold in the UI
// behaves exactly like hardware buttons.

export const BUTTONS = ["Left", "Right", "F1", "F2", "F3", "F4"] as const;
export type ButtonName = (typeof BUTTONS)[number];

export interface ButtonEdgePayload {
  kind: "button";
  button: ButtonName;
  edge: "down" | "up";
}

export interface TimedEdge {
  t: number;
  payload: ButtonEdgePayload;
}

export class ButtonPanel {
  private down = new Map<ButtonName, number>();
  private cursor = 0;

  constructor(private now: () => number) {}

  private stamp(at: number): number {
    this.cursor = Math.max(this.cursor + 1, at);
    return this.cursor;
  }

  press(button: ButtonName): TimedEdge | null {
    if (this.down.has(button)) return null; // edges must alternate
    const t = this.stamp(this.now());
    this.down.set(button, t);
    return { t, payload: { kind: "button", button, edge: "down" } };
  }

  release(button: ButtonName): TimedEdge | null {
    if (!this.down.has(button)) return null;
    this.down.delete(button);
    const t = this.stamp(this.now());
    return { t, payload: { kind: "button", button, edge: "up" } };
  }

  /** A full press of a chosen duration (quick: <200, hold: >=500). */
  pressFor(button: ButtonName, durationMs: number): TimedEdge[] {
    const downEdge = this.press(button);
    if (!downEdge) return [];
    const t = this.stamp(downEdge.t + durationMs);
    this.down.delete(button);
    return [downEdge, { t, payload: { kind: "button", button, edge: "up" } }];
  }

  /** Two buttons pressed together (within the combo window). */
  combo(a: ButtonName, b: ButtonName, holdMs = 300): TimedEdge[] {
    const first = this.press(a);
    if (!first) return [];
    const secondT = this.stamp(first.t + 50);
    this.down.set(b, secondT);
    const edges: TimedEdge[] = [
      first,
      { t: secondT, payload: { kind: "button", button: b, edge: "down" } },
    ];
    const upA = this.stamp(secondT + holdMs);
    const upB = this.stamp(upA + 10);
    this.down.delete(a);
    this.down.delete(b);
    edges.push({ t: upA, payload: { kind: "button", button: a, edge: "up" } });
    edges.push({ t: upB, payload: { kind: "button", button: b, edge: "up" } });
    return edges;
  }
}
