// Pure projection of a service snapshot into what the console draws.
// Every number below is copied from the payload or is display arithmetic on
// payload numbers (ratios, sums of per-event strings); the dynamics stay on
// the server.

import type { EventPayload, Snapshot } from "./types.js";

export interface AgentDot {
  agent: number;
  x: number;
  y: number;
  leader: boolean;
  /** Index of the component this agent sits in (for split tinting). */
  component: number;
}

export interface EdgeSegment {
  a: number;
  b: number;
}

export interface PredictionOverlay {
  anchor: [number, number];
  direction: [number, number];
  /** direction_y / direction_x; null for a vertical or zero direction. */
  slope: number | null;
  offsets: number[];
  /** Predicted resting offsets: anchor + offset_i * direction, per agent. */
  points: [number, number][];
}

export interface BoundGauge {
  /** |u| of the active broadcast, from the payload's command. */
  commanded: number;
  /** Achieved fraction of the commanded speed (payload beta). */
  beta: number;
  achieved: number;
  bound: number | null;
  unbounded: boolean;
  /** Warning state: the command exceeds every certified bound. */
  overBound: boolean;
}

export interface TickerLine {
  t: number;
  kind: string;
  text: string;
}

export interface ViewModel {
  t: number;
  status: string;
  split: boolean;
  dots: AgentDot[];
  edges: EdgeSegment[];
  overlay: PredictionOverlay | null;
  gauge: BoundGauge | null;
  ticker: TickerLine[];
  componentCount: number;
}

function describeEvent(ev: EventPayload): string {
  switch (ev.kind) {
    case "LinkLost":
      return `link ${JSON.stringify(ev.edge)} lost`;
    case "LinkGained":
      return `link ${JSON.stringify(ev.edge)} gained`;
    case "Split":
      return `swarm split into ${(ev.components as unknown[]).length} groups`;
    case "LeaderResample":
      return `leaders now ${JSON.stringify(ev.leaders)}`;
    case "BroadcastChange":
      return `command ${JSON.stringify(ev.u)}`;
    case "IntervalStart":
      return `interval ${ev.index}`;
    default:
      return ev.kind;
  }
}

export function buildViewModel(snap: Snapshot): ViewModel {
  const leaders = new Set(snap.leaders);
  const componentOf = new Map<number, number>();
  snap.components.forEach((group, k) => {
    for (const agent of group) componentOf.set(agent, k);
  });

  const dots: AgentDot[] = snap.positions.map((p, agent) => ({
    agent,
    x: p[0],
    y: p[1],
    leader: leaders.has(agent),
    component: componentOf.get(agent) ?? 0,
  }));

  const edges: EdgeSegment[] = snap.edges.map(([a, b]) => ({ a, b }));

  let overlay: PredictionOverlay | null = null;
  if (snap.prediction) {
    const line = snap.prediction.line;
    const [dx, dy] = [line.direction[0], line.direction[1]];
    overlay = {
      anchor: [line.anchor[0], line.anchor[1]],
      direction: [dx, dy],
      slope: dx !== 0 ? dy / dx : null,
      offsets: [...line.offsets],
      points: line.offsets.map((g) => [
        line.anchor[0] + g * dx,
        line.anchor[1] + g * dy,
      ]),
    };
  }

  let gauge: BoundGauge | null = null;
  if (snap.prediction && snap.certificate) {
    const commanded = Math.hypot(snap.u[0], snap.u[1]);
    const bound = snap.certificate.global_bound;
    const unbounded = snap.certificate.unbounded;
    gauge = {
      commanded,
      beta: snap.prediction.beta,
      achieved: snap.prediction.beta * commanded,
      bound,
      unbounded,
      // warn for any moving command that no certificate covers
      overBound:
        !unbounded && commanded > 0 && (bound === null || commanded > bound),
    };
  }

  const ticker: TickerLine[] = snap.recent_events.map((ev) => ({
    t: ev.t,
    kind: ev.kind,
    text: describeEvent(ev),
  }));

  return {
    t: snap.t,
    status: snap.status,
    split: snap.status === "split",
    dots,
    edges,
    overlay,
    gauge,
    ticker,
    componentCount: snap.components.length,
  };
}
