// Wire contracts of the session service. The console renders these payloads
// verbatim: no field here is ever recomputed client-side.

export interface LinePayload {
  anchor: number[];
  direction: number[];
  offsets: number[];
}

export interface PredictionPayload {
  alpha: number[];
  beta: number;
  gamma: number[];
  u: number[];
  model: string;
  line: LinePayload;
}

export interface VerdictPayload {
  edge: number[];
  class: string;
  rule: string;
  bound?: number;
}

export interface CertificatePayload {
  scenario_id: string;
  verdicts: VerdictPayload[];
  global_bound: number | null;
  unbounded: boolean;
  assumptions: string[];
  notes: string[];
}

export interface EventPayload {
  kind: string;
  t: number;
  [extra: string]: unknown;
}

export interface Snapshot {
  id: string;
  t: number;
  status: string;
  model: string;
  radius: number;
  positions: number[][];
  leaders: number[];
  u: number[];
  edges: number[][];
  components: number[][];
  prediction: PredictionPayload | null;
  certificate: CertificatePayload | null;
  events_total: number;
  recent_events: EventPayload[];
}

export interface StreamMessage {
  type: "snapshot" | "event";
  payload: Snapshot | EventPayload;
}

export interface IntervalSummary {
  start: number;
  u: number[];
  leaders: number[];
}

export interface CommandAck {
  interval: IntervalSummary;
  prediction: PredictionPayload | null;
  certificate: CertificatePayload;
  speed: number;
  over_bound: boolean;
}

export interface BroadcastCommand {
  u: [number, number];
  detect_prob?: number;
  leaders?: number[];
  seed_offset?: number;
}
