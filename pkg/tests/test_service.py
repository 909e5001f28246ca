import json
import threading

import numpy as np
import pytest
from fastapi.testclient import TestClient

from swarmcast.asymptotics import LeaderSet, predict
from swarmcast.goldens import EXAMPLE_A
from swarmcast.graphs import InfluenceModel
from swarmcast.jsonutil import dumps_canonical
from swarmcast.service import create_app

# Geometry realizing the worked 5-agent incomplete graph: a 4-cycle
# 0-1-2-4-0 laid out as a square of side 6 (diagonals 8.49 out of range)
# with agent 3 hanging 6.5 below agent 4. Sensing radius 7.
EXAMPLE_A_POSITIONS = [[0.0, 0.0], [6.0, 0.0], [6.0, 6.0], [0.0, 12.5], [0.0, 6.0]]
EXAMPLE_A_RADIUS = 7.0


def example_a_scenario(model="scaled"):
    return {
        "seed": 11,
        "n": 5,
        "radius": EXAMPLE_A_RADIUS,
        "model": model,
        "positions": EXAMPLE_A_POSITIONS,
        "horizon": 100.0,
        "sample_dt": 0.05,
        "schedule": [],
    }


@pytest.fixture()
def client():
    return TestClient(create_app())


def test_example_a_geometry_really_is_example_a():
    from swarmcast.graphs import build_visibility_graph

    g = build_visibility_graph(EXAMPLE_A_POSITIONS, EXAMPLE_A_RADIUS)
    assert g.edges == EXAMPLE_A.edges


def test_create_and_snapshot(client):
    r = client.post("/sessions", json=example_a_scenario())
    assert r.status_code == 200
    doc = r.json()
    assert doc["status"] == "paused" and doc["t"] == 0.0
    sid = doc["id"]
    state = client.get(f"/sessions/{sid}/state").json()
    assert state["positions"] == EXAMPLE_A_POSITIONS
    assert state["prediction"] is None
    assert state["leaders"] == []


def test_distinct_ids(client):
    a = client.post("/sessions", json=example_a_scenario()).json()["id"]
    b = client.post("/sessions", json=example_a_scenario()).json()["id"]
    assert a != b


def test_invalid_model_rejected(client):
    doc = example_a_scenario()
    doc["model"] = "psychic"
    r = client.post("/sessions", json=doc)
    assert r.status_code == 422
    assert "unknown influence model" in r.json()["error"]


def test_unknown_session_404(client):
    assert client.get("/sessions/zzz/state").status_code == 404


def test_broadcast_response_carries_prediction_and_certificate(client):
    sid = client.post("/sessions", json=example_a_scenario()).json()["id"]
    r = client.post(
        f"/sessions/{sid}/broadcast", json={"u": [10.0, 2.0], "detect_prob": 1.0}
    )
    doc = r.json()
    assert doc["interval"]["leaders"] == [0, 1, 2, 3, 4]
    # everyone detected: full speed, slope of the alignment line is u_y/u_x
    assert doc["prediction"]["beta"] == pytest.approx(1.0)
    d = doc["prediction"]["line"]["direction"]
    assert d[1] / d[0] == pytest.approx(0.2)


def test_broadcast_explicit_leader_beta(client):
    sid = client.post("/sessions", json=example_a_scenario("scaled")).json()["id"]
    doc = client.post(
        f"/sessions/{sid}/broadcast", json={"u": [10.0, 2.0], "leaders": [4]}
    ).json()
    # degree-weighted fraction: leader has 3 of 10 degree ends
    assert doc["prediction"]["beta"] == pytest.approx(0.3)
    assert doc["certificate"]["global_bound"] is None  # scaled + incomplete


def test_zero_velocity_broadcast_is_pure_gathering(client):
    sid = client.post("/sessions", json=example_a_scenario()).json()["id"]
    doc = client.post(
        f"/sessions/{sid}/broadcast", json={"u": [0.0, 0.0], "leaders": [1]}
    ).json()
    # leader 1 holds 2 of the 10 degree ends
    assert doc["prediction"]["beta"] == pytest.approx(0.2)
    assert doc["speed"] == 0.0


def test_snapshot_prediction_bytes_match_asymptotics(client):
    sid = client.post("/sessions", json=example_a_scenario("uniform")).json()["id"]
    client.post(f"/sessions/{sid}/broadcast", json={"u": [10.0, 2.0], "leaders": [4]})
    state = client.get(f"/sessions/{sid}/state").json()
    pos = np.asarray(EXAMPLE_A_POSITIONS, float)
    g = EXAMPLE_A
    expected = predict(
        g.__class__(n=5, edges=g.edges, radius=EXAMPLE_A_RADIUS),
        InfluenceModel.UNIFORM,
        LeaderSet.of([4]),
        pos[:, 0],
        pos[:, 1],
        [10.0, 2.0],
    ).to_payload()
    assert dumps_canonical(state["prediction"]) == dumps_canonical(expected)


def test_advance_requires_running(client):
    sid = client.post("/sessions", json=example_a_scenario()).json()["id"]
    r = client.post(f"/sessions/{sid}/advance", json={"dt": 1.0})
    assert r.status_code == 409
    client.post(f"/sessions/{sid}/resume")
    r = client.post(f"/sessions/{sid}/advance", json={"dt": 1.0})
    assert r.status_code == 200
    assert r.json()["t"] == pytest.approx(1.0)
    client.post(f"/sessions/{sid}/pause")
    assert client.post(f"/sessions/{sid}/advance", json={"dt": 1.0}).status_code == 409


def test_advance_zero_dt_is_noop(client):
    sid = client.post("/sessions", json=example_a_scenario()).json()["id"]
    client.post(f"/sessions/{sid}/resume")
    before = client.get(f"/sessions/{sid}/state").json()
    after = client.post(f"/sessions/{sid}/advance", json={"dt": 0.0}).json()
    assert after["t"] == before["t"]
    assert after["positions"] == before["positions"]


def test_events_logged_exactly_once(client):
    sid = client.post("/sessions", json=example_a_scenario()).json()["id"]
    client.post(f"/sessions/{sid}/broadcast", json={"u": [1.0, 0.0], "leaders": [0]})
    client.post(f"/sessions/{sid}/resume")
    client.post(f"/sessions/{sid}/advance", json={"dt": 2.0})
    client.post(f"/sessions/{sid}/advance", json={"dt": 2.0})
    events = client.get(f"/sessions/{sid}/log?since=0").json()["events"]
    starts = [e for e in events if e["kind"] == "IntervalStart"]
    assert len(starts) == len({json.dumps(e, sort_keys=True) for e in starts})
    # pagination
    tail = client.get(f"/sessions/{sid}/log?since={len(events)}").json()
    assert tail["events"] == []
    assert tail["next"] == len(events)


def test_split_halts_session(client):
    doc = {
        "seed": 7,
        "n": 6,
        "radius": 50.0,
        "model": "scaled",
        "positions": {"random": {"box": [-20, 20]}},
        "horizon": 100.0,
        "sample_dt": 0.02,
        "schedule": [],
    }
    sid = client.post("/sessions", json=doc).json()["id"]
    client.post(
        f"/sessions/{sid}/broadcast", json={"u": [180.0, 0.0], "leaders": [0, 1]}
    )
    client.post(f"/sessions/{sid}/resume")
    client.post(f"/sessions/{sid}/advance", json={"dt": 30.0})
    state = client.get(f"/sessions/{sid}/state").json()
    assert state["status"] == "split"
    assert len(state["components"]) == 2
    assert sorted(map(sorted, state["components"]))[0] == [0, 1]
    # further commands conflict
    assert (
        client.post(
            f"/sessions/{sid}/broadcast", json={"u": [0.0, 0.0], "leaders": [0]}
        ).status_code
        == 409
    )
    assert client.post(f"/sessions/{sid}/resume").status_code == 409


def test_over_bound_flag(client):
    doc = example_a_scenario("uniform")
    doc["positions"] = [[0, 0], [1, 0], [0, 1], [1, 1]]
    doc["n"] = 4
    doc["radius"] = 2.0  # complete graph, uniform bound = 8
    sid = client.post("/sessions", json=doc).json()["id"]
    ok = client.post(
        f"/sessions/{sid}/broadcast", json={"u": [3.0, 0.0], "leaders": [0]}
    ).json()
    assert not ok["over_bound"]
    hot = client.post(
        f"/sessions/{sid}/broadcast", json={"u": [10.0, 2.0], "leaders": [0]}
    ).json()
    assert hot["over_bound"]


def test_identical_command_sequences_reproduce_logs(client):
    doc = example_a_scenario()
    doc["positions"] = {"random": {"box": [-10, 10]}}
    commands = [
        {"u": [5.0, 1.0], "detect_prob": 0.5},
        {"u": [0.0, 0.0], "detect_prob": 0.8},
    ]
    logs = []
    for _ in range(2):
        sid = client.post("/sessions", json=doc).json()["id"]
        client.post(f"/sessions/{sid}/resume")
        for cmd in commands:
            client.post(f"/sessions/{sid}/broadcast", json=cmd)
            client.post(f"/sessions/{sid}/advance", json={"dt": 1.0})
        logs.append(client.get(f"/sessions/{sid}/log?since=0").text)
    assert logs[0] == logs[1]


def test_concurrent_broadcasts_totally_ordered(client):
    sid = client.post("/sessions", json=example_a_scenario()).json()["id"]
    errors = []

    def fire(k):
        r = client.post(
            f"/sessions/{sid}/broadcast", json={"u": [float(k), 0.0], "leaders": [k % 5]}
        )
        if r.status_code != 200:
            errors.append(r.status_code)

    threads = [threading.Thread(target=fire, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    events = client.get(f"/sessions/{sid}/log?since=0").json()["events"]
    kinds = [e["kind"] for e in events]
    # after the initial IntervalStart, commands appear as uninterleaved triplets
    assert kinds[0] == "IntervalStart"
    rest = kinds[1:]
    assert len(rest) == 8 * 3
    for k in range(8):
        assert rest[3 * k : 3 * k + 3] == [
            "BroadcastChange",
            "LeaderResample",
            "IntervalStart",
        ]


def test_websocket_stream_snapshot_and_events(client):
    sid = client.post("/sessions", json=example_a_scenario()).json()["id"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        first = json.loads(ws.receive_text())
        assert first["type"] == "snapshot"
        assert first["payload"]["t"] == 0.0
        client.post(
            f"/sessions/{sid}/broadcast", json={"u": [1.0, 1.0], "leaders": [2]}
        )
        kinds = set()
        for _ in range(20):
            msg = json.loads(ws.receive_text())
            kinds.add(msg["type"])
            if msg["type"] == "event":
                break
        assert "event" in kinds


def test_numbers_serialized_with_17_significant_digits(client):
    doc = example_a_scenario()
    doc["positions"][0][0] = 1 / 3
    sid = client.post("/sessions", json=doc).json()["id"]
    text = client.get(f"/sessions/{sid}/state").text
    assert "0.33333333333333331" in text
