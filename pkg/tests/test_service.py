"""HTTP facade: snapshots, mutations, flow injection, delta stream."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from farsec import build_network, dump_requests, Flow
from farsec.orchestrator import initial_state
from farsec.service import (
    EngineService,
    apply_delta,
    build_snapshot,
    canonical_json,
    create_app,
    empty_service,
    service_from_dir,
)
from conftest import (
    DEMO_HOSTS,
    DEMO_RESOURCES,
    DEMO_SLA,
    EXAMPLE_HOST_IPS,
    EXAMPLE_LINKS,
    EXAMPLE_NODES,
    EXAMPLE_PORT_SLA,
    EXAMPLE_SOLUTION,
    demo_flow_header,
    example_packet,
)


def _example_dir(tmp_path):
    flows = [
        Flow(fid, origin, destination, example_packet(fid))
        for fid, origin, destination, _ in (
            ("0001", "N1", "N2", 3),
            ("0010", "N2", "N4", 2),
            ("0011", "N3", "N2", 1),
            ("0100", "N4", "N1", 2),
        )
    ]
    (tmp_path / "resources.csv").write_text(
        "Source,Destination,Security\n"
        + "".join(f"{u},{v},{lvl}\n" for u, v, lvl in EXAMPLE_LINKS),
        newline="",
    )
    (tmp_path / "requests.csv").write_text(dump_requests(flows), newline="")
    (tmp_path / "sla.csv").write_text(EXAMPLE_PORT_SLA, newline="")
    (tmp_path / "hosts.csv").write_text(
        "Host,Switch,IP\n"
        + "".join(f"h{n},{n},{EXAMPLE_HOST_IPS[n]}\n" for n in EXAMPLE_NODES),
        newline="",
    )
    return tmp_path


def _demo_client(tmp_path):
    (tmp_path / "resources.csv").write_text(DEMO_RESOURCES, newline="")
    (tmp_path / "sla.csv").write_text(DEMO_SLA, newline="")
    (tmp_path / "hosts.csv").write_text(
        "Host,Switch,IP\n" + "".join(f"{h.name},{h.switch},{h.ip}\n" for h in DEMO_HOSTS),
        newline="",
    )
    service = service_from_dir(tmp_path)
    return service, TestClient(create_app(service))


def test_state_of_loaded_example(tmp_path):
    service = service_from_dir(_example_dir(tmp_path))
    client = TestClient(create_app(service))
    snapshot = client.get("/api/state").json()
    assert snapshot["version"] == 0
    assert len(snapshot["topology"]["nodes"]) == 4
    assert len(snapshot["topology"]["links"]) == 12
    assert len(snapshot["flows"]) == 4
    decisions = {f["id"]: f for f in snapshot["flows"]}
    for fid, expected in EXAMPLE_SOLUTION.items():
        if expected is None:
            assert decisions[fid]["admitted"] is False
            assert decisions[fid]["path"] is None
        else:
            assert decisions[fid]["admitted"] is True
            assert tuple(decisions[fid]["path"]) == expected


def test_empty_server_state():
    client = TestClient(create_app(empty_service()))
    snapshot = client.get("/api/state").json()
    assert snapshot == {
        "version": 0,
        "topology": {"nodes": [], "links": []},
        "hosts": [],
        "flows": [],
        "sla": {"default_min_sec": 0, "rules": []},
    }


def test_link_security_mutation(tmp_path):
    service, client = _demo_client(tmp_path)
    before = client.get("/api/state").json()["version"]
    response = client.post("/api/link-security", json={"src": "s1", "dst": "s2", "level": 9})
    assert response.status_code == 200
    assert response.json()["version"] == before + 1
    snapshot = client.get("/api/state").json()
    assert snapshot["version"] == before + 1
    levels = {(l["src"], l["dst"]): l["level"] for l in snapshot["topology"]["links"]}
    assert levels[("s1", "s2")] == 9

    # same level again: version still advances, mapping unchanged
    flows_before = snapshot["flows"]
    response = client.post("/api/link-security", json={"src": "s1", "dst": "s2", "level": 9})
    assert response.json()["version"] == before + 2
    assert client.get("/api/state").json()["flows"] == flows_before


def test_link_security_errors(tmp_path):
    _, client = _demo_client(tmp_path)
    assert client.post(
        "/api/link-security", json={"src": "s1", "dst": "s9", "level": 1}
    ).status_code == 404
    assert client.post(
        "/api/link-security", json={"src": "s1", "dst": "s2", "level": -1}
    ).status_code == 400


def test_flow_injection_admit_and_reject(tmp_path):
    service, client = _demo_client(tmp_path)
    body = {
        "source-host": "h1",
        "dest-host": "h3",
        "header-hex": demo_flow_header(5000),
    }
    response = client.post("/api/flows", json=body)
    assert response.status_code == 200
    decision = response.json()
    assert decision["admitted"] is True
    assert decision["requirement"] == 3
    assert decision["path"] == ["s1", "s2", "s3"]

    # same flow twice shares the decision and the path
    again = client.post("/api/flows", json=body).json()
    assert again["flow_id"] == decision["flow_id"]
    assert again["path"] == decision["path"]

    # cripple both branches; a fresh equivalent flow is rejected
    client.post("/api/link-security", json={"src": "s2", "dst": "s3", "level": 1})
    client.post("/api/link-security", json={"src": "s4", "dst": "s3", "level": 1})
    rejected = client.post(
        "/api/flows",
        json={**body, "header-hex": demo_flow_header(5001)},
    ).json()
    assert rejected["admitted"] is False
    assert rejected["path"] is None


def test_flow_injection_errors(tmp_path):
    _, client = _demo_client(tmp_path)
    assert client.post(
        "/api/flows",
        json={"source-host": "h9", "dest-host": "h3", "header-hex": demo_flow_header(5000)},
    ).status_code == 404
    assert client.post(
        "/api/flows",
        json={"source-host": "h1", "dest-host": "h3", "header-hex": "zzzz"},
    ).status_code == 400
    # header addresses must belong to the named hosts
    assert client.post(
        "/api/flows",
        json={"source-host": "h2", "dest-host": "h3", "header-hex": demo_flow_header(5000)},
    ).status_code == 400


def test_put_sla_reevaluates(tmp_path):
    service, client = _demo_client(tmp_path)
    client.post(
        "/api/flows",
        json={"source-host": "h1", "dest-host": "h3", "header-hex": demo_flow_header(5000)},
    )
    harsher = DEMO_SLA.replace(",5000,5005,3", ",5000,5005,9")
    response = client.put("/api/sla", content=harsher)
    assert response.status_code == 200
    snapshot = client.get("/api/state").json()
    assert snapshot["flows"][0]["admitted"] is False
    assert snapshot["sla"]["rules"][0]["min_sec"] == 9

    assert client.put("/api/sla", content="bogus").status_code == 400


def test_delta_stream_order_and_replay_equivalence(tmp_path):
    service, client = _demo_client(tmp_path)
    base = json.loads(canonical_json(client.get("/api/state").json()))
    start = base["version"]

    client.post(
        "/api/flows",
        json={"source-host": "h1", "dest-host": "h3", "header-hex": demo_flow_header(5000)},
    )
    client.post("/api/link-security", json={"src": "s2", "dst": "s3", "level": 2})
    client.post("/api/link-security", json={"src": "s4", "dst": "s3", "level": 2})
    final_version = client.get("/api/state").json()["version"]

    deltas = []
    with client.stream("GET", f"/api/events?since={start}&until={final_version}") as stream:
        for line in stream.iter_lines():
            if line.startswith("data: "):
                deltas.append(json.loads(line[len("data: "):]))

    assert [d["version"] for d in deltas] == list(range(start + 1, final_version + 1))

    # a link downgrade below the requirement emits the link delta and the
    # admission flip for the affected flow in the same versioned unit
    downgrade = deltas[1]
    assert downgrade["changes"]["links_upserted"] == [{"src": "s2", "dst": "s3", "level": 2}]
    assert downgrade["changes"]["flows_upserted"][0]["path"] == ["s1", "s4", "s3"]

    replayed = base
    for delta in deltas:
        replayed = apply_delta(replayed, delta)
    assert canonical_json(replayed) == canonical_json(client.get("/api/state").json())


def test_delta_stream_long_replay(tmp_path):
    service, client = _demo_client(tmp_path)
    base = client.get("/api/state").json()
    start = base["version"]
    levels = [2, 3, 4, 5]
    edges = [("s1", "s2"), ("s2", "s3"), ("s1", "s4"), ("s4", "s3")]
    port = 5000
    for round_number in range(40):
        src, dst = edges[round_number % 4]
        client.post(
            "/api/link-security",
            json={"src": src, "dst": dst, "level": levels[round_number % 4]},
        )
        for _ in range(4):
            client.post(
                "/api/flows",
                json={
                    "source-host": "h1",
                    "dest-host": "h3",
                    "header-hex": demo_flow_header(5000 + port % 6),
                },
            )
            port += 1
    final = client.get("/api/state").json()
    assert final["version"] == start + 200

    deltas = service.deltas_since(start)
    replayed = json.loads(canonical_json(base))
    for delta in deltas:
        replayed = apply_delta(replayed, delta)
    assert canonical_json(replayed) == canonical_json(final)


def test_snapshot_internal_consistency(tmp_path):
    service, client = _demo_client(tmp_path)
    client.post(
        "/api/flows",
        json={"source-host": "h1", "dest-host": "h3", "header-hex": demo_flow_header(5000)},
    )
    snapshot = client.get("/api/state").json()
    links = {(l["src"], l["dst"]) for l in snapshot["topology"]["links"]}
    for flow in snapshot["flows"]:
        if flow["path"]:
            hops = list(zip(flow["path"], flow["path"][1:]))
            assert all(hop in links for hop in hops)


def test_no_mutation_no_emission(tmp_path):
    service, _ = _demo_client(tmp_path)
    assert service.deltas_since(0) == []


def test_slow_subscriber_is_disconnected_without_blocking(tmp_path):
    service, client = _demo_client(tmp_path)
    queue_handle, _, _ = service.subscribe(since=0)
    # never drained: once the queue overflows the subscriber is dropped and
    # mutations keep flowing
    for _ in range(queue_handle.maxsize + 5):
        client.post("/api/link-security", json={"src": "s1", "dst": "s2", "level": 7})
    assert queue_handle.qsize() == queue_handle.maxsize
    final = client.get("/api/state").json()
    assert final["version"] == queue_handle.maxsize + 5
