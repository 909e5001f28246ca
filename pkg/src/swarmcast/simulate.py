"""Swarm trajectory integration over piecewise-constant intervals.

Within one interval (fixed graph, leaders, and command) the dynamics are
linear and are propagated exactly through the interval graph's
eigensystem. The visibility graph is state dependent, so the engine scans
consecutive states for pairs crossing the sensing radius, localizes each
crossing by bisection on the exact trajectory, and starts a new interval
there. A classical one-step RK4 integrator is kept alongside as the
independent cross-check of the propagator.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .asymptotics import LeaderSet
from .errors import (
    InvalidInputError,
    ScenarioValidationError,
    SwarmcastError,
)
from .graphs import (
    InfluenceModel,
    VisibilityGraph,
    build_visibility_graph,
    connected_components,
    induced_subgraph,
    laplacian,
)
from .jsonutil import dumps_canonical, format_float
from .spectral import spectrum

SEED_ENV_VAR = "SWARMCAST_SEED"
CROSSING_TIME_TOL = 1e-9

RUNNING = "running"
SPLIT = "split"
FINISHED = "finished"


# -- core state types ----------------------------------------------------


@dataclass
class SwarmState:
    """Positions plus the active broadcast configuration at time t."""

    t: float
    x: np.ndarray
    y: np.ndarray
    leaders: LeaderSet
    u: np.ndarray

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def positions(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])


@dataclass(frozen=True)
class IntervalSpec:
    """One piecewise-constant stretch: frozen graph, leaders, and command."""

    start: float
    u: np.ndarray
    leaders: LeaderSet
    graph: VisibilityGraph
    model: InfluenceModel


@dataclass(frozen=True)
class RunEvent:
    kind: str  # IntervalStart | LinkLost | LinkGained | Split | LeaderResample | BroadcastChange
    t: float
    payload: dict

    def to_dict(self) -> dict:
        return {"kind": self.kind, "t": self.t, **self.payload}


@dataclass
class RunLog:
    """Append-only record of one run: events, sampled trajectory, outcome."""

    scenario_id: str
    seed: int
    events: list
    samples: list  # rows (t, agent, x, y, is_leader)
    final_state: SwarmState
    status: str

    def events_of(self, kind: str) -> list:
        return [e for e in self.events if e.kind == kind]

    def sample_times(self) -> np.ndarray:
        return np.unique([row[0] for row in self.samples])

    def trajectory_array(self) -> np.ndarray:
        """Samples as a float array with columns t, agent, x, y, is_leader."""
        return np.array(self.samples, dtype=float)

    def write_trajectory_csv(self, path):
        with open(path, "w") as fh:
            fh.write("t,agent,x,y,is_leader\n")
            for t, agent, x, y, lead in self.samples:
                fh.write(
                    f"{format_float(t)},{int(agent)},{format_float(x)},"
                    f"{format_float(y)},{int(lead)}\n"
                )

    def write_events_jsonl(self, path):
        with open(path, "w") as fh:
            for ev in self.events:
                fh.write(dumps_canonical(ev.to_dict()) + "\n")


# -- scenarios -----------------------------------------------------------


@dataclass(frozen=True)
class ScheduleEntry:
    t: float
    u: tuple
    detect_prob: float = None
    leaders: tuple = None


@dataclass
class Scenario:
    """Declarative experiment input; see ``Scenario.from_dict`` for the wire form."""

    n: int
    radius: float
    model: InfluenceModel
    seed: int = 0
    positions: np.ndarray = None
    random_box: tuple = None
    horizon: float = 10.0
    sample_dt: float = 0.05
    continue_after_split: bool = False
    schedule: list = field(default_factory=list)
    name: str = ""

    def validate(self):
        if self.n < 1:
            raise ScenarioValidationError("n must be >= 1")
        if not (self.radius > 0):
            raise ScenarioValidationError("radius must be positive")
        if not (self.horizon > 0):
            raise ScenarioValidationError("horizon must be positive")
        if not (self.sample_dt > 0):
            raise ScenarioValidationError("sample_dt must be positive")
        if self.positions is None and self.random_box is None:
            raise ScenarioValidationError("provide positions or a random box")
        if self.positions is not None:
            pos = np.asarray(self.positions, dtype=float)
            if pos.shape != (self.n, 2):
                raise ScenarioValidationError(
                    f"positions shape {pos.shape} does not match n={self.n}"
                )
            if not np.all(np.isfinite(pos)):
                raise ScenarioValidationError("positions must be finite")
        if self.random_box is not None:
            lo, hi = self.random_box
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ScenarioValidationError("random box must satisfy lo < hi")
        last_t = -np.inf
        for entry in self.schedule:
            if not np.isfinite(entry.t) or entry.t < 0 or entry.t >= self.horizon:
                raise ScenarioValidationError(
                    f"schedule time {entry.t} outside [0, horizon)"
                )
            if entry.t < last_t:
                raise ScenarioValidationError("schedule must be sorted by time")
            last_t = entry.t
            u = np.asarray(entry.u, dtype=float)
            if u.shape != (2,) or not np.all(np.isfinite(u)):
                raise ScenarioValidationError("schedule u must be a finite pair")
            has_p = entry.detect_prob is not None
            has_l = entry.leaders is not None
            if has_p == has_l:
                raise ScenarioValidationError(
                    "each schedule entry needs exactly one of detect_prob or leaders"
                )
            if has_p and not (0 < entry.detect_prob <= 1):
                raise ScenarioValidationError("detect_prob must be in (0, 1]")
            if has_l:
                LeaderSet.of(entry.leaders).validate(self.n)

    def resolved_seed(self) -> int:
        env = os.environ.get(SEED_ENV_VAR)
        if env is not None and env.strip():
            return int(env) & 0xFFFFFFFFFFFFFFFF
        return int(self.seed) & 0xFFFFFFFFFFFFFFFF

    def initial_positions(self, rng) -> np.ndarray:
        if self.positions is not None:
            return np.asarray(self.positions, dtype=float).copy()
        lo, hi = self.random_box
        return rng.uniform(lo, hi, size=(self.n, 2))

    # wire format ---------------------------------------------------------

    @classmethod
    def from_dict(cls, doc: dict) -> "Scenario":
        if not isinstance(doc, dict):
            raise ScenarioValidationError("scenario must be a JSON object")
        try:
            model = InfluenceModel.parse(doc["model"])
        except KeyError:
            raise ScenarioValidationError("scenario needs a model field")
        except InvalidInputError as exc:
            raise ScenarioValidationError(str(exc))
        positions = None
        random_box = None
        raw_pos = doc.get("positions")
        if isinstance(raw_pos, dict):
            box = raw_pos.get("random", {}).get("box")
            if box is None or len(box) != 2:
                raise ScenarioValidationError('random positions need {"box": [lo, hi]}')
            random_box = (float(box[0]), float(box[1]))
        elif raw_pos is not None:
            positions = np.asarray(raw_pos, dtype=float)
        n = int(doc.get("n", 0 if positions is None else positions.shape[0]))
        schedule = []
        for item in doc.get("schedule", []):
            schedule.append(
                ScheduleEntry(
                    t=float(item.get("t", 0.0)),
                    u=tuple(float(v) for v in item.get("u", (0.0, 0.0))),
                    detect_prob=(
                        float(item["detect_prob"]) if "detect_prob" in item else None
                    ),
                    leaders=(
                        tuple(int(v) for v in item["leaders"])
                        if "leaders" in item
                        else None
                    ),
                )
            )
        sc = cls(
            n=n,
            radius=float(doc.get("radius", 0.0)),
            model=model,
            seed=int(doc.get("seed", 0)),
            positions=positions,
            random_box=random_box,
            horizon=float(doc.get("horizon", 10.0)),
            sample_dt=float(doc.get("sample_dt", 0.05)),
            continue_after_split=bool(doc.get("continue_after_split", False)),
            schedule=schedule,
            name=str(doc.get("name", "")),
        )
        sc.validate()
        return sc

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioValidationError(f"invalid JSON: {exc}")
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        doc = {
            "seed": int(self.seed),
            "n": self.n,
            "radius": self.radius,
            "model": self.model.value,
            "horizon": self.horizon,
            "sample_dt": self.sample_dt,
            "continue_after_split": self.continue_after_split,
            "schedule": [],
        }
        if self.name:
            doc["name"] = self.name
        if self.positions is not None:
            doc["positions"] = np.asarray(self.positions, dtype=float).tolist()
        else:
            doc["positions"] = {"random": {"box": list(self.random_box)}}
        for entry in self.schedule:
            item = {"t": entry.t, "u": list(entry.u)}
            if entry.detect_prob is not None:
                item["detect_prob"] = entry.detect_prob
            if entry.leaders is not None:
                item["leaders"] = list(entry.leaders)
            doc["schedule"].append(item)
        return doc


class SeedStream:
    """Counter-based splittable randomness: child k is independent of child j."""

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._counter = 1  # 0 is reserved for initial positions

    def generator(self, counter: int) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(int(counter),))
        return np.random.Generator(np.random.Philox(seq))

    def next_generator(self) -> np.random.Generator:
        g = self.generator(self._counter)
        self._counter += 1
        return g

    def draw(self, offset: int = 0) -> np.random.Generator:
        """Generator at the current counter shifted by ``offset``; advances by one."""
        g = self.generator(self._counter + int(offset))
        self._counter += 1
        return g


def sample_leaders(n: int, p: float, rng) -> LeaderSet:
    """Independent detection with probability p; redraws until somebody detects."""
    if not (0 < p <= 1):
        raise InvalidInputError("detection probability must be in (0, 1]")
    while True:
        picks = np.nonzero(rng.random(n) < p)[0]
        if picks.size:
            return LeaderSet.of(picks.tolist())


# -- single-interval propagation ----------------------------------------


def _mode_gains(lam: np.ndarray, tau: float) -> np.ndarray:
    """Input gains per mode: tau on the agreement mode, (1-e^{-lam tau})/lam otherwise."""
    g = np.empty_like(lam)
    for k, lk in enumerate(lam):
        if lk < 1e-12:
            g[k] = tau
        else:
            g[k] = (1.0 - np.exp(-lk * tau)) / lk
    return g


def exact_state(spec: IntervalSpec, x0, y0, tau: float) -> SwarmState:
    """Closed-form state after elapsed time ``tau`` of one interval.

    Per axis the solution is the decaying modal mixture of the initial
    state plus the accumulated command response; the graph must be
    connected so that exactly one mode carries the collective drift.
    """
    if tau < 0:
        raise InvalidInputError("tau must be nonnegative")
    g = spec.graph
    if len(connected_components(g)) != 1:
        raise SwarmcastError("exact propagation needs a connected interval graph")
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    dec = spectrum(g, spec.model)
    lam, V, Wt = dec.eigenvalues, dec.right_vectors, dec.left_vectors_t
    b = spec.leaders.indicator(g.n)
    decay = np.exp(-np.clip(lam, 0.0, None) * tau)
    gains = _mode_gains(lam, tau)
    cb = Wt @ b
    x = V @ (decay * (Wt @ x0) + gains * cb * spec.u[0])
    y = V @ (decay * (Wt @ y0) + gains * cb * spec.u[1])
    return SwarmState(
        t=spec.start + tau, x=x, y=y, leaders=spec.leaders, u=np.asarray(spec.u, float)
    )


def integrate_step(state: SwarmState, spec: IntervalSpec, dt: float) -> SwarmState:
    """One classical 4th-order step of the interval dynamics."""
    if not (dt > 0):
        raise InvalidInputError("dt must be positive")
    L = laplacian(spec.graph, spec.model)
    b = spec.leaders.indicator(spec.graph.n)
    x, y = _kernels.rk4_advance(
        np.ascontiguousarray(L), b, float(spec.u[0]), float(spec.u[1]),
        state.x.astype(float), state.y.astype(float), float(dt), 1,
    )
    return SwarmState(t=state.t + dt, x=x, y=y, leaders=state.leaders, u=state.u)


def integrate_many(state: SwarmState, spec: IntervalSpec, dt: float, steps: int):
    """RK4 advance by ``steps`` fixed steps (kernel loop, used by oracles)."""
    L = laplacian(spec.graph, spec.model)
    b = spec.leaders.indicator(spec.graph.n)
    x, y = _kernels.rk4_advance(
        np.ascontiguousarray(L), b, float(spec.u[0]), float(spec.u[1]),
        state.x.astype(float), state.y.astype(float), float(dt), int(steps),
    )
    return SwarmState(
        t=state.t + dt * steps, x=x, y=y, leaders=state.leaders, u=state.u
    )


# -- crossing detection ---------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    edge: tuple
    kind: str  # LinkLost | LinkGained
    t: float


def detect_edge_crossings(state_a: SwarmState, state_b: SwarmState, radius: float):
    """Radius crossings between two consecutive integrator states.

    Positions are interpolated linearly between the states; each pair whose
    in-range membership differs at the endpoints is bisected to the moment
    of crossing, localized to 1e-9 time units.
    """
    if state_b.t < state_a.t:
        raise InvalidInputError("states must be time ordered")
    r2 = float(radius) ** 2
    d2a = _kernels.pairwise_dist2(state_a.x, state_a.y)
    d2b = _kernels.pairwise_dist2(state_b.x, state_b.y)
    span = state_b.t - state_a.t
    out = []
    n = state_a.n
    for i in range(n - 1):
        for j in range(i + 1, n):
            in_a = d2a[i, j] <= r2
            in_b = d2b[i, j] <= r2
            if in_a == in_b:
                continue
            lo, hi = 0.0, 1.0
            if span > 0:
                while (hi - lo) * span > CROSSING_TIME_TOL:
                    mid = 0.5 * (lo + hi)
                    dx = (1 - mid) * (state_a.x[i] - state_a.x[j]) + mid * (
                        state_b.x[i] - state_b.x[j]
                    )
                    dy = (1 - mid) * (state_a.y[i] - state_a.y[j]) + mid * (
                        state_b.y[i] - state_b.y[j]
                    )
                    if (dx * dx + dy * dy <= r2) == in_a:
                        lo = mid
                    else:
                        hi = mid
            kind = "LinkLost" if in_a else "LinkGained"
            out.append(Crossing(edge=(i, j), kind=kind, t=state_a.t + hi * span))
    return sorted(out, key=lambda c: (c.t, c.edge))


# -- multi-interval engine -------------------------------------------------


class _ComponentFlow:
    """Exact evolution of one connected component over one interval."""

    def __init__(self, idx, sub, model, x0, y0, b, u):
        self.idx = idx
        self.b = b
        self.u = u
        self.x0 = x0
        self.y0 = y0
        if len(idx) == 1:
            self.dec = None
        else:
            self.dec = spectrum(sub, model)
            Wt = self.dec.left_vectors_t
            self.cx = Wt @ x0
            self.cy = Wt @ y0
            self.cb = Wt @ b

    def positions_at(self, tau: float):
        if self.dec is None:
            return (
                self.x0 + self.b * self.u[0] * tau,
                self.y0 + self.b * self.u[1] * tau,
            )
        lam = self.dec.eigenvalues
        V = self.dec.right_vectors
        decay = np.exp(-np.clip(lam, 0.0, None) * tau)
        gains = _mode_gains(lam, tau)
        x = V @ (decay * self.cx + gains * self.cb * self.u[0])
        y = V @ (decay * self.cy + gains * self.cb * self.u[1])
        return x, y


class SwarmEngine:
    """Advances a swarm through piecewise-constant intervals.

    The graph is frozen at each interval start; radius crossings close the
    interval early and the graph is re-derived at the crossing time. On a
    component split the engine either halts (default) or keeps evolving
    each component independently per the scenario flag.
    """

    def __init__(
        self,
        n: int,
        radius: float,
        model: InfluenceModel,
        x0,
        y0,
        sample_dt: float = 0.05,
        continue_after_split: bool = False,
    ):
        self.n = n
        self.radius = float(radius)
        self.model = model
        self.x = np.asarray(x0, dtype=float).copy()
        self.y = np.asarray(y0, dtype=float).copy()
        if self.x.shape != (n,) or self.y.shape != (n,):
            raise InvalidInputError("x0/y0 must be length-n")
        self.sample_dt = float(sample_dt)
        self.continue_after_split = continue_after_split
        self.t = 0.0
        self.u = np.zeros(2)
        self.leaders = LeaderSet.empty()
        self.events = []
        self.samples = []
        self.status = RUNNING
        self._interval_index = -1
        self._interval_t0 = 0.0
        self._interval_graph = None
        self._flows = []
        self._prev_component_count = 1
        self._next_sample = 0.0
        self._record_sample()
        self._next_sample = self.sample_dt
        self._open_interval()

    # ---- bookkeeping ----

    def _emit(self, kind: str, payload: dict):
        self.events.append(RunEvent(kind=kind, t=self.t, payload=payload))

    def _record_sample(self):
        if self.samples and abs(self.samples[-1][0] - self.t) < 1e-12:
            return
        lead = self.leaders.indicator(self.n)
        for a in range(self.n):
            self.samples.append(
                (self.t, a, float(self.x[a]), float(self.y[a]), int(lead[a]))
            )

    def state(self) -> SwarmState:
        return SwarmState(
            t=self.t,
            x=self.x.copy(),
            y=self.y.copy(),
            leaders=self.leaders,
            u=self.u.copy(),
        )

    def interval_spec(self) -> IntervalSpec:
        return IntervalSpec(
            start=self._interval_t0,
            u=self.u.copy(),
            leaders=self.leaders,
            graph=self._interval_graph,
            model=self.model,
        )

    # ---- interval management ----

    def _open_interval(self):
        g = build_visibility_graph(np.column_stack([self.x, self.y]), self.radius)
        if self._interval_graph is not None:
            lost = sorted(self._interval_graph.edges - g.edges)
            gained = sorted(g.edges - self._interval_graph.edges)
            for e in lost:
                self._emit("LinkLost", {"edge": list(e)})
            for e in gained:
                self._emit("LinkGained", {"edge": list(e)})
        comps = connected_components(g)
        if len(comps) > self._prev_component_count:
            self._emit("Split", {"components": comps})
            if not self.continue_after_split:
                self.status = SPLIT
        self._prev_component_count = len(comps)
        self._interval_graph = g
        self._interval_t0 = self.t
        self._interval_index += 1
        if self.status != RUNNING:
            self._flows = []
            return
        b_full = self.leaders.indicator(self.n)
        self._flows = []
        for comp in comps:
            sub, idx = induced_subgraph(g, comp)
            self._flows.append(
                _ComponentFlow(
                    idx=idx,
                    sub=sub,
                    model=self.model,
                    x0=self.x[idx],
                    y0=self.y[idx],
                    b=b_full[idx],
                    u=self.u,
                )
            )
        self._emit(
            "IntervalStart",
            {
                "index": self._interval_index,
                "u": self.u.tolist(),
                "leaders": self.leaders.sorted(),
                "edges": len(g.edges),
                "components": len(comps),
            },
        )

    def _positions_at(self, tau: float):
        x = np.empty(self.n)
        y = np.empty(self.n)
        for flow in self._flows:
            cx, cy = flow.positions_at(tau)
            x[flow.idx] = cx
            y[flow.idx] = cy
        return x, y

    # ---- advancement ----

    def set_broadcast(self, u, leaders: LeaderSet):
        """Close the current interval now and open one with a new command."""
        if self.status != RUNNING:
            raise SwarmcastError(f"cannot broadcast while {self.status}")
        leaders.validate(self.n)
        u = np.asarray(u, dtype=float).reshape(2)
        if not np.all(np.isfinite(u)):
            raise InvalidInputError("u must be finite")
        self._record_sample()
        self._emit("BroadcastChange", {"u": u.tolist()})
        self._emit("LeaderResample", {"leaders": leaders.sorted()})
        self.u = u
        self.leaders = leaders
        self._open_interval()

    def advance(self, dt: float):
        """Advance simulated time by ``dt`` (stops early if the run halts)."""
        if dt < 0:
            raise InvalidInputError("dt must be nonnegative")
        t_end = self.t + dt
        while self.status == RUNNING and t_end - self.t > 1e-12:
            target = min(t_end, self._next_sample)
            if target - self.t > 1e-12:
                self._step_to(target)
            if self.status == RUNNING and abs(self.t - self._next_sample) < 1e-12:
                self._record_sample()
                self._next_sample += self.sample_dt

    def _step_to(self, target: float):
        tau0 = self.t - self._interval_t0
        tau1 = target - self._interval_t0
        xb, yb = self._positions_at(tau1)
        tau_star = self._earliest_crossing(tau0, tau1, xb, yb)
        if tau_star is None:
            self.x, self.y = xb, yb
            self.t = target
            return
        self.x, self.y = self._positions_at(tau_star)
        self.t = self._interval_t0 + tau_star
        self._record_sample()
        self._open_interval()

    def _earliest_crossing(self, tau0, tau1, xb, yb):
        r2 = self.radius * self.radius
        d2a = _kernels.pairwise_dist2(self.x, self.y)
        d2b = _kernels.pairwise_dist2(xb, yb)
        in_a = d2a <= r2
        in_b = d2b <= r2
        ii, jj = np.nonzero(np.triu(in_a != in_b, 1))
        if ii.size == 0:
            return None
        best = None
        for i, j in zip(ii.tolist(), jj.tolist()):
            lo, hi = tau0, tau1
            start_in = bool(in_a[i, j])
            while hi - lo > CROSSING_TIME_TOL:
                mid = 0.5 * (lo + hi)
                x, y = self._positions_at(mid)
                d2 = (x[i] - x[j]) ** 2 + (y[i] - y[j]) ** 2
                if (d2 <= r2) == start_in:
                    lo = mid
                else:
                    hi = mid
            if best is None or hi < best:
                best = hi
        return best

    def finish(self):
        if self.status == RUNNING:
            self._record_sample()
            self.status = FINISHED

    def build_log(self, scenario_id: str, seed: int) -> RunLog:
        self._record_sample()
        return RunLog(
            scenario_id=scenario_id,
            seed=seed,
            events=list(self.events),
            samples=list(self.samples),
            final_state=self.state(),
            status=self.status,
        )


def run_scenario(sc: Scenario) -> RunLog:
    """Execute a scenario schedule start to finish and return its log."""
    sc.validate()
    seed = sc.resolved_seed()
    stream = SeedStream(seed)
    pos = sc.initial_positions(stream.generator(0))
    eng = SwarmEngine(
        n=sc.n,
        radius=sc.radius,
        model=sc.model,
        x0=pos[:, 0],
        y0=pos[:, 1],
        sample_dt=sc.sample_dt,
        continue_after_split=sc.continue_after_split,
    )
    for entry in sc.schedule:
        if eng.status != RUNNING:
            break
        eng.advance(entry.t - eng.t)
        if eng.status != RUNNING:
            break
        if entry.leaders is not None:
            who = LeaderSet.of(entry.leaders)
        else:
            who = sample_leaders(sc.n, entry.detect_prob, stream.next_generator())
        eng.set_broadcast(np.asarray(entry.u, dtype=float), who)
    if eng.status == RUNNING:
        eng.advance(sc.horizon - eng.t)
    eng.finish()
    return eng.build_log(scenario_id=sc.name or f"run-{seed}", seed=seed)
