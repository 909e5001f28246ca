"""Interactive steering service.

Hosts swarm sessions over HTTP + WebSocket. Each session owns one engine,
guarded by a lock so commands are totally ordered; snapshots are built
under the lock and cached, so reads stay cheap no matter how long the log
grows. Simulated time advances either through explicit ``advance`` calls
or, when the session is running with a positive clock ratio, through a
background pacing loop that advances fixed simulated steps.
"""

from __future__ import annotations

import itertools
import threading
import time
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request, Response, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from .asymptotics import LeaderSet, predict
from .errors import DisconnectedGraphError, ScenarioValidationError, SwarmcastError
from .jsonutil import dumps_canonical
from .safety import certify
from .simulate import RUNNING, Scenario, SeedStream, SwarmEngine, sample_leaders

PAUSED = "paused"


@dataclass
class Session:
    id: str
    scenario: Scenario
    engine: SwarmEngine
    stream: SeedStream
    lock: threading.Lock = field(default_factory=threading.Lock)
    paused: bool = True
    clock_ratio: float = 0.0  # simulated seconds per wall second; 0 = manual
    step: float = 0.05
    prediction: dict = None
    certificate: dict = None
    snapshot_cache: dict = None
    runner: threading.Thread = None

    def status(self) -> str:
        if self.engine.status != RUNNING:
            return self.engine.status  # split | finished
        return PAUSED if self.paused else RUNNING

    def refresh_snapshot(self):
        eng = self.engine
        g = eng._interval_graph
        recent = [e.to_dict() for e in eng.events[-10:]]
        self.snapshot_cache = {
            "id": self.id,
            "t": eng.t,
            "status": self.status(),
            "model": eng.model.value,
            "radius": eng.radius,
            "positions": np.column_stack([eng.x, eng.y]).tolist(),
            "leaders": eng.leaders.sorted(),
            "u": eng.u.tolist(),
            "edges": sorted([list(e) for e in g.edges]) if g else [],
            "components": _components_payload(eng),
            "prediction": self.prediction,
            "certificate": self.certificate,
            "events_total": len(eng.events),
            "recent_events": recent,
        }

    def snapshot(self) -> dict:
        return self.snapshot_cache


def _components_payload(eng: SwarmEngine):
    from .graphs import connected_components

    if eng._interval_graph is None:
        return [[i for i in range(eng.n)]]
    return connected_components(eng._interval_graph)


def canonical_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=dumps_canonical(payload),
        media_type="application/json",
        status_code=status_code,
    )


def error_response(message: str, status_code: int) -> Response:
    return canonical_response({"error": message}, status_code=status_code)


def create_app() -> FastAPI:
    app = FastAPI(title="swarmcast session service")
    sessions: dict = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        s = sessions.get(session_id)
        if s is None:
            raise KeyError(session_id)
        return s

    @app.exception_handler(KeyError)
    async def _not_found(request: Request, exc: KeyError):
        return error_response("session not found", 404)

    @app.post("/sessions")
    def create_session(doc: dict):
        try:
            sc = Scenario.from_dict(doc)
        except ScenarioValidationError as exc:
            return error_response(str(exc), 422)
        seed = sc.resolved_seed()
        stream = SeedStream(seed)
        pos = sc.initial_positions(stream.generator(0))
        engine = SwarmEngine(
            n=sc.n,
            radius=sc.radius,
            model=sc.model,
            x0=pos[:, 0],
            y0=pos[:, 1],
            sample_dt=sc.sample_dt,
            continue_after_split=sc.continue_after_split,
        )
        with registry_lock:
            sid = f"s{next(counter):06d}"
        session = Session(id=sid, scenario=sc, engine=engine, stream=stream)
        session.refresh_snapshot()
        sessions[sid] = session
        return canonical_response({"id": sid, "status": session.status(), "t": 0.0})

    @app.post("/sessions/{session_id}/broadcast")
    def broadcast(session_id: str, doc: dict):
        s = get_session(session_id)
        with s.lock:
            if s.engine.status != RUNNING:
                return error_response(f"session is {s.engine.status}", 409)
            u = doc.get("u")
            if u is None or len(u) != 2 or not np.all(np.isfinite(np.asarray(u, float))):
                return error_response("broadcast needs a finite velocity pair u", 422)
            u = np.asarray(u, dtype=float)
            try:
                if "leaders" in doc and doc["leaders"] is not None:
                    leaders = LeaderSet.of(doc["leaders"])
                    leaders.validate(s.engine.n)
                elif "detect_prob" in doc and doc["detect_prob"] is not None:
                    p = float(doc["detect_prob"])
                    if not (0 < p <= 1):
                        return error_response("detect_prob must be in (0, 1]", 422)
                    rng = s.stream.draw(offset=int(doc.get("seed_offset", 0)))
                    leaders = sample_leaders(s.engine.n, p, rng)
                else:
                    return error_response(
                        "broadcast needs leaders or detect_prob", 422
                    )
            except SwarmcastError as exc:
                return error_response(str(exc), 422)
            s.engine.set_broadcast(u, leaders)
            g = s.engine._interval_graph
            try:
                pred = predict(
                    g, s.engine.model, leaders, s.engine.x, s.engine.y, u
                )
                s.prediction = pred.to_payload()
            except DisconnectedGraphError:
                s.prediction = None
            cert = certify(
                g,
                leaders,
                s.engine.model,
                positions=np.column_stack([s.engine.x, s.engine.y]),
                scenario_id=s.id,
            )
            s.certificate = cert.to_payload()
            speed = float(np.hypot(u[0], u[1]))
            payload = {
                "interval": {
                    "start": s.engine.t,
                    "u": u.tolist(),
                    "leaders": leaders.sorted(),
                },
                "prediction": s.prediction,
                "certificate": s.certificate,
                "speed": speed,
                "over_bound": not cert.allows_speed(speed),
            }
            s.refresh_snapshot()
        return canonical_response(payload)

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str, doc: dict):
        s = get_session(session_id)
        with s.lock:
            if s.status() != RUNNING:
                return error_response(f"session is {s.status()}", 409)
            dt = float(doc.get("dt", 0.0))
            if dt < 0:
                return error_response("dt must be nonnegative", 422)
            s.engine.advance(dt)
            s.refresh_snapshot()
            return canonical_response(s.snapshot())

    @app.post("/sessions/{session_id}/pause")
    def pause(session_id: str):
        s = get_session(session_id)
        with s.lock:
            s.paused = True
            s.refresh_snapshot()
            return canonical_response({"id": s.id, "status": s.status()})

    @app.post("/sessions/{session_id}/resume")
    def resume(session_id: str):
        s = get_session(session_id)
        with s.lock:
            if s.engine.status != RUNNING:
                return error_response(f"session is {s.engine.status}", 409)
            s.paused = False
            s.refresh_snapshot()
            _ensure_runner(s)
            return canonical_response({"id": s.id, "status": s.status()})

    @app.post("/sessions/{session_id}/clock")
    def set_clock(session_id: str, doc: dict):
        s = get_session(session_id)
        with s.lock:
            ratio = float(doc.get("ratio", 0.0))
            if ratio < 0:
                return error_response("clock ratio must be nonnegative", 422)
            s.clock_ratio = ratio
            _ensure_runner(s)
            return canonical_response({"id": s.id, "clock_ratio": s.clock_ratio})

    @app.get("/sessions/{session_id}/state")
    def state(session_id: str):
        s = get_session(session_id)
        with s.lock:
            return canonical_response(s.snapshot())

    @app.get("/sessions/{session_id}/log")
    def log(session_id: str, since: int = 0):
        s = get_session(session_id)
        with s.lock:
            events = [e.to_dict() for e in s.engine.events[since:]]
            return canonical_response(
                {"events": events, "next": since + len(events)}
            )

    def _ensure_runner(s: Session):
        if s.clock_ratio <= 0 or s.paused:
            return
        if s.runner is not None and s.runner.is_alive():
            return

        def loop():
            while True:
                with s.lock:
                    if s.paused or s.clock_ratio <= 0 or s.engine.status != RUNNING:
                        return
                    s.engine.advance(s.step)
                    s.refresh_snapshot()
                    wall = s.step / s.clock_ratio
                time.sleep(wall)

        s.runner = threading.Thread(target=loop, daemon=True)
        s.runner.start()

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str):
        import anyio

        await websocket.accept()
        s = sessions.get(session_id)
        if s is None:
            await websocket.send_text(dumps_canonical({"error": "session not found"}))
            await websocket.close()
            return
        sent_events = 0
        try:
            with s.lock:
                snap = s.snapshot()
                sent_events = snap["events_total"]
            await websocket.send_text(
                dumps_canonical({"type": "snapshot", "payload": snap})
            )
            while True:
                await anyio.sleep(0.05)
                with s.lock:
                    events = [e.to_dict() for e in s.engine.events[sent_events:]]
                    snap = s.snapshot()
                for ev in events:
                    await websocket.send_text(
                        dumps_canonical({"type": "event", "payload": ev})
                    )
                sent_events += len(events)
                await websocket.send_text(
                    dumps_canonical({"type": "snapshot", "payload": snap})
                )
        except WebSocketDisconnect:
            return

    @app.get("/healthz")
    def health():
        return JSONResponse({"ok": True})

    return app


app = create_app()
