// Frame smoothing between two consecutive snapshots: positions move on the
// straight line between the samples, every discrete field (leaders, edges,
// prediction, certificate) comes from the newer snapshot unchanged. Nothing
// here extrapolates or integrates.

import type { Snapshot } from "./types.js";

export function lerpSnapshots(a: Snapshot, b: Snapshot, s: number): Snapshot {
  const w = Math.min(1, Math.max(0, s));
  if (w >= 1 || a.positions.length !== b.positions.length) return b;
  const positions = b.positions.map((pb, i) => {
    const pa = a.positions[i];
    return [pa[0] + w * (pb[0] - pa[0]), pa[1] + w * (pb[1] - pa[1])];
  });
  return { ...b, t: a.t + w * (b.t - a.t), positions };
}
