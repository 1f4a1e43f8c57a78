"""HTTP/JSON facade over the controller.

Exposes the live state as a canonical-JSON snapshot, accepts mutations
(link security, SLA replacement, flow injection), and pushes version-tagged
deltas over a server-sent event stream. Deltas are structural diffs between
consecutive snapshots, so a client holding snapshot v and applying deltas
v+1..w reconstructs snapshot w byte for byte.

All mutations funnel through one lock around the event loop; reads serve the
latest published snapshot without blocking writers.
"""

from __future__ import annotations

import json
import queue
import threading
from pathlib import Path as FsPath
from typing import Callable, Iterator

from fastapi import Body, FastAPI, HTTPException, Request, Response
from fastapi.responses import StreamingResponse

from .network import NetworkError, SecureNetwork, load_resources
from .sla import (
    PROTOCOL_NAMES,
    HeaderError,
    SlaError,
    SlaPolicy,
    load_sla,
    parse_header,
)
from .orchestrator import (
    DataplaneState,
    EventKind,
    Host,
    NetworkEvent,
    OrchestratorError,
    RuleChange,
    handle_event,
    initial_state,
)
from .solver import FlowError, load_requests

HOSTS_HEADER = "Host,Switch,IP"


def canonical_json(value: object) -> str:
    """Sorted keys, no spaces; the byte form snapshots are compared in."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def build_snapshot(state: DataplaneState) -> dict:
    """Project a controller state onto the wire-facing snapshot shape."""
    return {
        "version": state.version,
        "topology": {
            "nodes": list(state.network.nodes),
            "links": [
                {"src": src, "dst": dst, "level": level}
                for (src, dst), level in state.network.levels.items()
            ],
        },
        "hosts": [
            {"name": h.name, "switch": h.switch, "ip": str(h.ip)} for h in state.hosts
        ],
        "flows": [
            {
                "id": f.flow_id,
                "origin": f.origin,
                "destination": f.destination,
                "requirement": f.requirement,
                "admitted": f.admitted,
                "path": list(f.path.nodes) if f.admitted else None,
                "header": f.header,
            }
            for f in state.flows.values()
        ],
        "sla": {
            "default_min_sec": state.sla.default_min_sec,
            "rules": [
                {
                    "protocol": PROTOCOL_NAMES[r.protocol],
                    "src_cidr": str(r.src_cidr),
                    "dst_cidr": str(r.dst_cidr),
                    "dscp": r.dscp,
                    "src_port_min": r.src_port_min,
                    "src_port_max": r.src_port_max,
                    "dst_port_min": r.dst_port_min,
                    "dst_port_max": r.dst_port_max,
                    "min_sec": r.min_sec,
                }
                for r in state.sla.rules
            ],
        },
    }


def snapshot_delta(old: dict, new: dict, rule_changes: list[RuleChange]) -> dict:
    """Structural diff turning snapshot ``old`` into snapshot ``new``."""
    old_links = {(l["src"], l["dst"]): l for l in old["topology"]["links"]}
    new_links = {(l["src"], l["dst"]): l for l in new["topology"]["links"]}
    old_flows = {f["id"]: f for f in old["flows"]}
    new_flows = {f["id"]: f for f in new["flows"]}
    return {
        "version": new["version"],
        "changes": {
            "nodes_added": [n for n in new["topology"]["nodes"] if n not in old["topology"]["nodes"]],
            "nodes_removed": [n for n in old["topology"]["nodes"] if n not in new["topology"]["nodes"]],
            "links_upserted": [
                link
                for key, link in new_links.items()
                if old_links.get(key) != link
            ],
            "links_removed": [
                [src, dst] for (src, dst) in old_links if (src, dst) not in new_links
            ],
            "flows_upserted": [
                flow for fid, flow in new_flows.items() if old_flows.get(fid) != flow
            ],
            "flows_removed": [fid for fid in old_flows if fid not in new_flows],
            "sla": new["sla"] if new["sla"] != old["sla"] else None,
            "hosts": new["hosts"] if new["hosts"] != old["hosts"] else None,
        },
        "rule_diff": [
            {
                "action": c.action,
                "device": c.rule.device,
                "flow_id": c.rule.flow_id,
                "out_src": c.rule.out_edge[0],
                "out_dst": c.rule.out_edge[1],
            }
            for c in rule_changes
        ],
    }


def apply_delta(snapshot: dict, delta: dict) -> dict:
    """Pure client-side replay step: snapshot(v) + delta(v+1) -> snapshot(v+1).

    Ordering mirrors the server: new nodes, links and flows append; updates
    replace in place; removals keep the remaining order.
    """
    changes = delta["changes"]
    nodes = [n for n in snapshot["topology"]["nodes"] if n not in changes["nodes_removed"]]
    nodes.extend(changes["nodes_added"])

    removed_links = {tuple(pair) for pair in changes["links_removed"]}
    upserted = {(l["src"], l["dst"]): l for l in changes["links_upserted"]}
    links = []
    for link in snapshot["topology"]["links"]:
        key = (link["src"], link["dst"])
        if key in removed_links:
            continue
        links.append(upserted.pop(key, link))
    links.extend(upserted.values())

    removed_flows = set(changes["flows_removed"])
    upserted_flows = {f["id"]: f for f in changes["flows_upserted"]}
    flows = []
    for flow in snapshot["flows"]:
        if flow["id"] in removed_flows:
            continue
        flows.append(upserted_flows.pop(flow["id"], flow))
    flows.extend(upserted_flows.values())

    return {
        "version": delta["version"],
        "topology": {"nodes": nodes, "links": links},
        "hosts": changes["hosts"] if changes["hosts"] is not None else snapshot["hosts"],
        "flows": flows,
        "sla": changes["sla"] if changes["sla"] is not None else snapshot["sla"],
    }


class EngineService:
    """Single-writer wrapper: serialized mutations, lock-free snapshot reads."""

    def __init__(self, state: DataplaneState):
        self._lock = threading.Lock()
        self._state = state
        self._snapshot = build_snapshot(state)
        self._deltas: list[dict] = []
        self._subscribers: list[queue.Queue] = []

    @property
    def version(self) -> int:
        return self._snapshot["version"]

    @property
    def state(self) -> DataplaneState:
        return self._state

    def snapshot(self) -> dict:
        return self._snapshot

    def apply(self, event: NetworkEvent) -> dict:
        """Process one event; returns the published delta."""
        with self._lock:
            new_state, changes = handle_event(self._state, event)
            new_snapshot = build_snapshot(new_state)
            delta = snapshot_delta(self._snapshot, new_snapshot, changes)
            self._state = new_state
            self._snapshot = new_snapshot
            self._deltas.append(delta)
            dead = []
            for q in self._subscribers:
                try:
                    q.put_nowait(delta)
                except queue.Full:
                    dead.append(q)  # slow client: cut it loose
            for q in dead:
                self._subscribers.remove(q)
            return delta

    def subscribe(self, since: int) -> tuple[queue.Queue, list[dict], Callable[[], None]]:
        """Queue of future deltas plus the backlog strictly after ``since``."""
        q: queue.Queue = queue.Queue(maxsize=1000)
        with self._lock:
            backlog = [d for d in self._deltas if d["version"] > since]
            self._subscribers.append(q)

        def unsubscribe() -> None:
            with self._lock:
                if q in self._subscribers:
                    self._subscribers.remove(q)

        return q, backlog, unsubscribe

    def deltas_since(self, since: int) -> list[dict]:
        with self._lock:
            return [d for d in self._deltas if d["version"] > since]


def load_hosts(text: str) -> list[Host]:
    """Parse the static host table CSV (``Host,Switch,IP``)."""
    import ipaddress

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines or lines[0] != HOSTS_HEADER:
        raise OrchestratorError(f"hosts file must start with {HOSTS_HEADER!r}")
    hosts = []
    for lineno, row in enumerate(lines[1:], start=2):
        parts = row.split(",")
        if len(parts) != 3:
            raise OrchestratorError(f"hosts line {lineno}: expected 3 fields")
        name, switch, ip_text = parts
        try:
            hosts.append(Host(name, switch, ipaddress.IPv4Address(ip_text)))
        except ipaddress.AddressValueError as exc:
            raise OrchestratorError(f"hosts line {lineno}: {exc}") from None
    return hosts


def service_from_dir(load_dir: str | FsPath) -> EngineService:
    """Boot a service from a directory of CSVs.

    ``resources.csv`` is required; ``sla.csv``, ``requests.csv`` (preloaded
    flows) and ``hosts.csv`` are optional.
    """
    root = FsPath(load_dir)
    network = load_resources((root / "resources.csv").read_text())
    sla = SlaPolicy()
    if (root / "sla.csv").exists():
        sla = load_sla((root / "sla.csv").read_text())
    hosts: list[Host] = []
    if (root / "hosts.csv").exists():
        hosts = load_hosts((root / "hosts.csv").read_text())
    preload = []
    if (root / "requests.csv").exists():
        preload = load_requests((root / "requests.csv").read_text())
    return EngineService(initial_state(network, sla, hosts, preload))


def empty_service() -> EngineService:
    return EngineService(initial_state(SecureNetwork((), {})))


def create_app(service: EngineService) -> FastAPI:
    """Wire the HTTP surface around one engine service."""
    app = FastAPI(title="farsec", docs_url=None, redoc_url=None)

    @app.get("/api/state")
    def get_state() -> Response:
        return Response(canonical_json(service.snapshot()), media_type="application/json")

    @app.post("/api/link-security")
    def post_link_security(body: dict = Body(...)) -> Response:
        src, dst, level = body.get("src"), body.get("dst"), body.get("level")
        if not isinstance(level, int) or isinstance(level, bool) or level < 0:
            raise HTTPException(400, f"level must be a nonnegative integer, got {level!r}")
        if not isinstance(src, str) or not isinstance(dst, str):
            raise HTTPException(400, "src and dst must be node ids")
        if not service.state.network.has_edge(src, dst):
            raise HTTPException(404, f"no link {src}->{dst}")
        try:
            delta = service.apply(
                NetworkEvent(
                    EventKind.LINK_SECURITY_CHANGED,
                    {"src": src, "dst": dst, "level": level},
                    tick=service.version + 1,
                )
            )
        except NetworkError as exc:  # link vanished between check and apply
            raise HTTPException(404, str(exc)) from None
        return Response(canonical_json({"version": delta["version"]}), media_type="application/json")

    @app.post("/api/flows")
    def post_flow(body: dict = Body(...)) -> Response:
        source = body.get("source-host")
        dest = body.get("dest-host")
        header = body.get("header-hex")
        state = service.state
        src_host = state.host_named(source) if isinstance(source, str) else None
        dst_host = state.host_named(dest) if isinstance(dest, str) else None
        if src_host is None or dst_host is None:
            raise HTTPException(404, "unknown host")
        if not isinstance(header, str):
            raise HTTPException(400, "header-hex must be a string")
        try:
            fields = parse_header(header)
        except HeaderError as exc:
            raise HTTPException(400, str(exc)) from None
        if fields.src_addr != src_host.ip or fields.dst_addr != dst_host.ip:
            raise HTTPException(
                400, "header addresses do not match the named hosts"
            )
        try:
            delta = service.apply(
                NetworkEvent(
                    EventKind.PACKET_IN,
                    {"header": header, "ingress": src_host.switch},
                    tick=service.version + 1,
                )
            )
        except (OrchestratorError, NetworkError) as exc:
            raise HTTPException(400, str(exc)) from None
        flow = next(
            f
            for f in reversed(list(service.state.flows.values()))
            if f.fields == fields
            and f.origin == src_host.switch
            and f.destination == dst_host.switch
        )
        return Response(
            canonical_json(
                {
                    "flow_id": flow.flow_id,
                    "admitted": flow.admitted,
                    "path": list(flow.path.nodes) if flow.admitted else None,
                    "requirement": flow.requirement,
                    "version": delta["version"],
                }
            ),
            media_type="application/json",
        )

    @app.put("/api/sla")
    async def put_sla(request: Request) -> Response:
        text = (await request.body()).decode()
        try:
            load_sla(text)
        except SlaError as exc:
            raise HTTPException(400, str(exc)) from None
        delta = service.apply(
            NetworkEvent(EventKind.SLA_UPDATED, {"csv": text}, tick=service.version + 1)
        )
        return Response(canonical_json({"version": delta["version"]}), media_type="application/json")

    @app.get("/api/events")
    def get_events(since: int | None = None, until: int | None = None) -> StreamingResponse:
        start = service.version if since is None else since

        def stream() -> Iterator[str]:
            q, backlog, unsubscribe = service.subscribe(start)
            try:
                last = start
                for delta in backlog:
                    last = delta["version"]
                    yield _sse(delta)
                    if until is not None and last >= until:
                        return
                if until is not None and last >= until:
                    return
                while True:
                    try:
                        delta = q.get(timeout=1.0)
                    except queue.Empty:
                        yield ": keep-alive\n\n"
                        continue
                    if delta["version"] <= last:
                        continue
                    last = delta["version"]
                    yield _sse(delta)
                    if until is not None and last >= until:
                        return
            finally:
                unsubscribe()

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app


def _sse(delta: dict) -> str:
    return f"id: {delta['version']}\nevent: delta\ndata: {canonical_json(delta)}\n\n"
