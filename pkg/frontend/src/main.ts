// Console entry point: connect to a session, render the stream, forward
// operator commands. Usage: index.html?session=<id>&base=http://host:port

import { SessionClient, ServiceError } from "./client.js";
import { attachControls } from "./controls.js";
import { lerpSnapshots } from "./interpolate.js";
import { fitViewport, renderScene } from "./render.js";
import type { DrawSurface } from "./render.js";
import type { Snapshot } from "./types.js";
import { buildViewModel } from "./viewmodel.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("base") ?? "http://127.0.0.1:8787";
const sessionId = params.get("session");

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const g = canvas.getContext("2d") as unknown as DrawSurface;
const statusLine = document.getElementById("status") as HTMLElement;

const client = new SessionClient(base);

let previous: Snapshot | null = null;
let latest: Snapshot | null = null;
let latestArrived = 0;
let snapshotGap = 200; // ms between snapshots, measured from the stream

function onSnapshot(snap: Snapshot) {
  const now = performance.now();
  if (latest) {
    snapshotGap = Math.max(40, Math.min(1000, now - latestArrived));
  }
  previous = latest;
  latest = snap;
  latestArrived = now;
}

function frame() {
  if (latest) {
    const s = previous
      ? (performance.now() - latestArrived) / snapshotGap
      : 1;
    const shown = previous ? lerpSnapshots(previous, latest, s) : latest;
    const vm = buildViewModel(shown);
    renderScene(g, vm, fitViewport(vm, canvas.width, canvas.height));
  }
  requestAnimationFrame(frame);
}

async function start() {
  if (!sessionId) {
    statusLine.textContent = "missing ?session=<id>";
    return;
  }
  client.connect(sessionId, {
    onSnapshot,
    onConnectionChange: (up) => {
      statusLine.textContent = up ? `session ${sessionId}` : "reconnecting...";
    },
  });

  attachControls(
    {
      ux: document.getElementById("ux") as HTMLInputElement,
      uy: document.getElementById("uy") as HTMLInputElement,
      prob: document.getElementById("prob") as HTMLInputElement,
      probLabel: document.getElementById("prob-label") as HTMLElement,
      send: document.getElementById("send") as HTMLButtonElement,
      legend: document.getElementById("legend") as HTMLElement,
      canvas,
    },
    { dragUnitsPerPixel: 0.25 },
    async (u, p) => {
      try {
        const ack = await client.submitCommand(sessionId, {
          u,
          detect_prob: p,
        });
        statusLine.textContent = ack.over_bound
          ? `sent u=(${u[0].toFixed(1)}, ${u[1].toFixed(1)}) - above certified bound!`
          : `sent u=(${u[0].toFixed(1)}, ${u[1].toFixed(1)})`;
      } catch (err) {
        if (err instanceof ServiceError && err.status === 409) {
          statusLine.textContent = `command rejected: ${err.message}`;
        } else {
          throw err;
        }
      }
    },
  );

  await client.resume(sessionId).catch(() => undefined);
  await client.setClock(sessionId, 1.0).catch(() => undefined);
  requestAnimationFrame(frame);
}

start();
