// Canvas renderer. Drawing goes through the narrow DrawSurface interface so
// headless tests can substitute a recording stub for CanvasRenderingContext2D.

import type { ViewModel } from "./viewmodel.js";

export interface DrawSurface {
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  font: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  setLineDash(segments: number[]): void;
}

export interface Viewport {
  width: number;
  height: number;
  /** World units per pixel. */
  scale: number;
  centerX: number;
  centerY: number;
}

export const PALETTE = {
  background: "#10141a",
  edge: "#3a4a5a",
  follower: "#6ab0f3",
  leader: "#f3c96a",
  leaderRing: "#ffe9b0",
  overlayLine: "#8be28b",
  overlayPoint: "#c4f3c4",
  gaugeOk: "#6ab06a",
  gaugeWarn: "#e25555",
  text: "#d8e0ea",
  componentTints: ["#6ab0f3", "#e28be2", "#8be2d5", "#e2b98b"],
};

export function worldToScreen(
  vp: Viewport,
  x: number,
  y: number,
): [number, number] {
  return [
    vp.width / 2 + (x - vp.centerX) / vp.scale,
    vp.height / 2 - (y - vp.centerY) / vp.scale,
  ];
}

/** Viewport centered on the swarm with ~15% margin. */
export function fitViewport(
  vm: ViewModel,
  width: number,
  height: number,
): Viewport {
  if (vm.dots.length === 0) {
    return { width, height, scale: 1, centerX: 0, centerY: 0 };
  }
  const xs = vm.dots.map((d) => d.x);
  const ys = vm.dots.map((d) => d.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const span = Math.max(maxX - minX, maxY - minY, 1e-9);
  return {
    width,
    height,
    scale: (1.3 * span) / Math.min(width, height),
    centerX: (minX + maxX) / 2,
    centerY: (minY + maxY) / 2,
  };
}

export function renderScene(g: DrawSurface, vm: ViewModel, vp: Viewport): void {
  g.fillStyle = PALETTE.background;
  g.fillRect(0, 0, vp.width, vp.height);

  // sensing links
  g.strokeStyle = PALETTE.edge;
  g.lineWidth = 1;
  g.setLineDash([]);
  for (const e of vm.edges) {
    const a = vm.dots[e.a];
    const b = vm.dots[e.b];
    const [ax, ay] = worldToScreen(vp, a.x, a.y);
    const [bx, by] = worldToScreen(vp, b.x, b.y);
    g.beginPath();
    g.moveTo(ax, ay);
    g.lineTo(bx, by);
    g.stroke();
  }

  // prediction overlay: alignment line plus predicted per-agent offsets
  if (vm.overlay) {
    const { anchor, direction } = vm.overlay;
    const norm = Math.hypot(direction[0], direction[1]);
    if (norm > 0) {
      const reach =
        (Math.max(vp.width, vp.height) * vp.scale) / norm;
      const [x0, y0] = worldToScreen(
        vp,
        anchor[0] - direction[0] * reach,
        anchor[1] - direction[1] * reach,
      );
      const [x1, y1] = worldToScreen(
        vp,
        anchor[0] + direction[0] * reach,
        anchor[1] + direction[1] * reach,
      );
      g.strokeStyle = PALETTE.overlayLine;
      g.setLineDash([6, 4]);
      g.beginPath();
      g.moveTo(x0, y0);
      g.lineTo(x1, y1);
      g.stroke();
      g.setLineDash([]);
    }
    g.fillStyle = PALETTE.overlayPoint;
    for (const [px, py] of vm.overlay.points) {
      const [sx, sy] = worldToScreen(vp, px, py);
      g.beginPath();
      g.arc(sx, sy, 2.5, 0, 2 * Math.PI);
      g.fill();
    }
  }

  // agents; split sessions tint per component
  for (const dot of vm.dots) {
    const [sx, sy] = worldToScreen(vp, dot.x, dot.y);
    const tint = vm.split
      ? PALETTE.componentTints[dot.component % PALETTE.componentTints.length]
      : PALETTE.follower;
    g.fillStyle = dot.leader ? PALETTE.leader : tint;
    g.beginPath();
    g.arc(sx, sy, dot.leader ? 7 : 5, 0, 2 * Math.PI);
    g.fill();
    if (dot.leader) {
      g.strokeStyle = PALETTE.leaderRing;
      g.lineWidth = 2;
      g.beginPath();
      g.arc(sx, sy, 10, 0, 2 * Math.PI);
      g.stroke();
    }
  }

  renderGauge(g, vm, vp);
  renderTicker(g, vm, vp);

  g.fillStyle = PALETTE.text;
  g.font = "12px monospace";
  g.fillText(`t = ${vm.t.toFixed(2)}   ${vm.status}`, 10, 16);
}

function renderGauge(g: DrawSurface, vm: ViewModel, vp: Viewport): void {
  if (!vm.gauge) return;
  const { commanded, achieved, bound, overBound, beta, unbounded } = vm.gauge;
  const x = 10;
  const y = vp.height - 34;
  const w = 180;
  const full = Math.max(commanded, bound ?? 0, 1e-9);
  g.strokeStyle = PALETTE.text;
  g.lineWidth = 1;
  g.strokeRect(x, y, w, 10);
  g.fillStyle = overBound ? PALETTE.gaugeWarn : PALETTE.gaugeOk;
  g.fillRect(x, y, (w * achieved) / full, 10);
  if (bound !== null) {
    const bx = x + (w * bound) / full;
    g.beginPath();
    g.moveTo(bx, y - 3);
    g.lineTo(bx, y + 13);
    g.stroke();
  }
  g.fillStyle = overBound ? PALETTE.gaugeWarn : PALETTE.text;
  g.font = "12px monospace";
  const boundText = unbounded ? "any speed safe" : bound === null ? "uncertified" : `bound ${bound.toPrecision(4)}`;
  g.fillText(
    `speed ${(100 * beta).toFixed(0)}% of |u|=${commanded.toPrecision(4)}  (${boundText})`,
    x,
    y - 8,
  );
  if (overBound) {
    g.fillText("WARNING: command exceeds certified bound", x, y + 26);
  }
}

function renderTicker(g: DrawSurface, vm: ViewModel, vp: Viewport): void {
  g.fillStyle = PALETTE.text;
  g.font = "11px monospace";
  const lines = vm.ticker.slice(-5);
  lines.forEach((line, k) => {
    g.fillText(
      `${line.t.toFixed(2)}  ${line.text}`,
      vp.width - 280,
      16 + 14 * k,
    );
  });
}
