import { describe, expect, it } from "vitest";
import fixture from "./fixtures/recorded_session.json";
import { PALETTE, fitViewport, renderScene, worldToScreen } from "../src/render.js";
import type { DrawSurface } from "../src/render.js";
import type { Snapshot, StreamMessage } from "../src/types.js";
import { buildViewModel } from "../src/viewmodel.js";

const hot = (fixture.stream as unknown as StreamMessage[])
  .filter((m) => m.type === "snapshot")
  .map((m) => m.payload as Snapshot)[2];

class RecordingSurface implements DrawSurface {
  fillStyle = "";
  strokeStyle = "";
  lineWidth = 1;
  font = "";
  calls: { op: string; args: unknown[]; fill: string; stroke: string }[] = [];
  private log(op: string, args: unknown[] = []) {
    this.calls.push({ op, args, fill: this.fillStyle, stroke: this.strokeStyle });
  }
  clearRect(...a: number[]) { this.log("clearRect", a); }
  beginPath() { this.log("beginPath"); }
  moveTo(...a: number[]) { this.log("moveTo", a); }
  lineTo(...a: number[]) { this.log("lineTo", a); }
  stroke() { this.log("stroke"); }
  arc(...a: number[]) { this.log("arc", a); }
  fill() { this.log("fill"); }
  fillRect(...a: number[]) { this.log("fillRect", a); }
  strokeRect(...a: number[]) { this.log("strokeRect", a); }
  fillText(text: string, x: number, y: number) { this.log("fillText", [text, x, y]); }
  setLineDash(seg: number[]) { this.log("setLineDash", [seg]); }
  texts(): string[] {
    return this.calls
      .filter((c) => c.op === "fillText")
      .map((c) => String(c.args[0]));
  }
}

describe("headless renderer", () => {
  it("draws leader dots in the highlight color and the warning text when over bound", () => {
    const vm = buildViewModel(hot);
    const g = new RecordingSurface();
    renderScene(g, vm, fitViewport(vm, 800, 600));

    const leaderFills = g.calls.filter(
      (c) => c.op === "fill" && c.fill === PALETTE.leader,
    );
    expect(leaderFills.length).toBe(hot.leaders.length);

    const warnings = g.texts().filter((t) => t.includes("WARNING"));
    expect(warnings.length).toBe(1);
    expect(warnings[0]).toContain("exceeds certified bound");
  });

  it("omits the warning when the command is inside the bound", () => {
    const low = (fixture.stream as unknown as StreamMessage[])
      .filter((m) => m.type === "snapshot")
      .map((m) => m.payload as Snapshot)[1];
    const g = new RecordingSurface();
    const vm = buildViewModel(low);
    renderScene(g, vm, fitViewport(vm, 800, 600));
    expect(g.texts().some((t) => t.includes("WARNING"))).toBe(false);
    // gauge text advertises the payload speed fraction
    expect(g.texts().some((t) => t.includes("speed 25%"))).toBe(true);
  });

  it("maps world to screen with y up", () => {
    const vp = { width: 200, height: 100, scale: 1, centerX: 0, centerY: 0 };
    expect(worldToScreen(vp, 0, 0)).toEqual([100, 50]);
    expect(worldToScreen(vp, 10, 10)).toEqual([110, 40]);
  });
});
