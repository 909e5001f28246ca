// Session service client: REST commands plus the streaming WebSocket with
// automatic reconnection. Transport is injectable so tests can drive the
// client from recorded payloads.

import type {
  BroadcastCommand,
  CommandAck,
  EventPayload,
  Snapshot,
  StreamMessage,
} from "./types.js";

export interface SocketLike {
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;
export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; text(): Promise<string> }>;

export interface ClientOptions {
  socketFactory?: SocketFactory;
  fetchFn?: FetchLike;
  retryDelayMs?: number;
}

export interface StreamHandlers {
  onSnapshot: (snap: Snapshot) => void;
  onEvent?: (ev: EventPayload) => void;
  onConnectionChange?: (up: boolean) => void;
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class SessionClient {
  private readonly fetchFn: FetchLike;
  private readonly socketFactory: SocketFactory;
  private readonly retryDelayMs: number;

  constructor(
    readonly baseUrl: string,
    opts: ClientOptions = {},
  ) {
    this.fetchFn = opts.fetchFn ?? (fetch as unknown as FetchLike);
    this.socketFactory =
      opts.socketFactory ??
      ((url) => new WebSocket(url) as unknown as SocketLike);
    this.retryDelayMs = opts.retryDelayMs ?? 1000;
  }

  private async request(method: string, path: string, body?: unknown) {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await res.text();
    const doc = text ? JSON.parse(text) : {};
    if (!res.ok) {
      throw new ServiceError(res.status, doc.error ?? `HTTP ${res.status}`);
    }
    return doc;
  }

  async createSession(scenario: unknown): Promise<string> {
    const doc = await this.request("POST", "/sessions", scenario);
    return doc.id as string;
  }

  async state(sessionId: string): Promise<Snapshot> {
    return (await this.request("GET", `/sessions/${sessionId}/state`)) as Snapshot;
  }

  async submitCommand(
    sessionId: string,
    cmd: BroadcastCommand,
  ): Promise<CommandAck> {
    return (await this.request(
      "POST",
      `/sessions/${sessionId}/broadcast`,
      cmd,
    )) as CommandAck;
  }

  async advance(sessionId: string, dt: number): Promise<Snapshot> {
    return (await this.request("POST", `/sessions/${sessionId}/advance`, {
      dt,
    })) as Snapshot;
  }

  async pause(sessionId: string) {
    return this.request("POST", `/sessions/${sessionId}/pause`);
  }

  async resume(sessionId: string) {
    return this.request("POST", `/sessions/${sessionId}/resume`);
  }

  async setClock(sessionId: string, ratio: number) {
    return this.request("POST", `/sessions/${sessionId}/clock`, { ratio });
  }

  /**
   * Subscribe to the live stream. Reconnects after a dropped socket until
   * the returned disconnect function is called.
   */
  connect(sessionId: string, handlers: StreamHandlers): () => void {
    const wsBase = this.baseUrl.replace(/^http/, "ws");
    let closed = false;
    let socket: SocketLike | null = null;
    let retry: ReturnType<typeof setTimeout> | null = null;

    const open = () => {
      if (closed) return;
      socket = this.socketFactory(`${wsBase}/sessions/${sessionId}/stream`);
      handlers.onConnectionChange?.(true);
      socket.onmessage = (ev) => {
        const msg = JSON.parse(ev.data) as StreamMessage;
        if (msg.type === "snapshot") {
          handlers.onSnapshot(msg.payload as Snapshot);
        } else if (msg.type === "event") {
          handlers.onEvent?.(msg.payload as EventPayload);
        }
      };
      const scheduleRetry = () => {
        if (closed) return;
        handlers.onConnectionChange?.(false);
        retry = setTimeout(open, this.retryDelayMs);
      };
      socket.onclose = scheduleRetry;
      socket.onerror = () => socket?.close();
    };

    open();
    return () => {
      closed = true;
      if (retry) clearTimeout(retry);
      socket?.close();
    };
  }
}
