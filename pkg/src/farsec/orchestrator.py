"""Event-driven controller emulation over a simulated rule-table dataplane.

The controller state bundles the topology, the SLA policy, a static host
table, every flow seen so far, and the per-device forwarding rules derived
from admitted flows. Events are processed strictly one at a time; each one
yields a new immutable state plus the list of rule installs and withdrawals,
so replaying an event log is deterministic by construction.

Topology and SLA events re-place every known flow. By default the loop
minimizes churn: a flow keeps its installed path as long as that path is
still feasible for its (possibly recomputed) requirement, and is re-pathed
only when the path broke or the flow was previously rejected. Flows that
lose every sufficiently secure path are withdrawn immediately.

``inject_packet`` walks the rule tables hop by hop the way the dataplane
would, returning the traversed node sequence or a drop, plus the table-miss
notification a default-deny dataplane would send to the controller.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from ipaddress import IPv4Address
from typing import Iterable

from .network import Edge, NetworkError, NodeId, Path, SecureNetwork, path_bottleneck
from .sla import HeaderFields, SlaPolicy, load_sla, min_security, parse_header
from .solver import Flow
from .widest import WidestPathsResult, all_pairs_widest


class OrchestratorError(ValueError):
    """Event that cannot be applied to the current state."""


class ForwardingLoopError(RuntimeError):
    """Rule tables sent a packet in circles; invariant violation."""


class EventKind(str, Enum):
    DEVICE_UP = "device-up"
    DEVICE_DOWN = "device-down"
    LINK_UP = "link-up"
    LINK_DOWN = "link-down"
    LINK_SECURITY_CHANGED = "link-security-changed"
    PACKET_IN = "packet-in"
    SLA_UPDATED = "sla-updated"


@dataclass(frozen=True)
class NetworkEvent:
    """One controller notification; payload shape depends on the kind."""

    kind: EventKind
    payload: dict
    tick: int = 0


@dataclass(frozen=True)
class Host:
    """Attachment point of one end host: its switch plus its IPv4 address."""

    name: str
    switch: NodeId
    ip: IPv4Address


@dataclass(frozen=True)
class ForwardingRule:
    device: NodeId
    match: HeaderFields
    out_edge: Edge
    flow_id: str


@dataclass(frozen=True)
class RuleChange:
    action: str  # "install" | "withdraw"
    rule: ForwardingRule


@dataclass(frozen=True)
class FlowState:
    """One known flow with its current requirement and placement."""

    flow_id: str
    origin: NodeId
    destination: NodeId
    header: str
    fields: HeaderFields
    requirement: int
    path: Path

    @property
    def admitted(self) -> bool:
        return bool(self.path)


@dataclass(frozen=True)
class TraceResult:
    """Outcome of one dataplane walk."""

    status: str  # "delivered" | "dropped"
    nodes: tuple[NodeId, ...]
    packet_in: NetworkEvent | None = None

    @property
    def delivered(self) -> bool:
        return self.status == "delivered"


@dataclass(frozen=True)
class DataplaneState:
    network: SecureNetwork
    sla: SlaPolicy
    hosts: tuple[Host, ...]
    flows: dict[str, FlowState]
    rules: dict[NodeId, tuple[ForwardingRule, ...]]
    version: int = 0
    flow_seq: int = 1
    churn_minimizing: bool = True
    _by_ip: dict[IPv4Address, Host] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_ip: dict[IPv4Address, Host] = {}
        for host in self.hosts:
            if host.ip in by_ip:
                raise OrchestratorError(f"duplicate host address {host.ip}")
            by_ip[host.ip] = host
        object.__setattr__(self, "_by_ip", by_ip)

    def host_for_ip(self, ip: IPv4Address) -> Host | None:
        return self._by_ip.get(ip)

    def host_named(self, name: str) -> Host | None:
        for host in self.hosts:
            if host.name == name:
                return host
        return None


def _feasible(network: SecureNetwork, path: Path, requirement: int) -> bool:
    if not path:
        return False
    for src, dst in path.edges:
        if not network.has_edge(src, dst) or network.level(src, dst) < requirement:
            return False
    return True


def _place(
    network: SecureNetwork,
    wp: WidestPathsResult,
    origin: NodeId,
    destination: NodeId,
    requirement: int,
) -> Path:
    """Widest-path placement with the admission test applied."""
    if not network.has_node(origin) or not network.has_node(destination):
        return Path()
    candidate = wp.path(origin, destination)
    if candidate and path_bottleneck(network, candidate) >= requirement:
        return candidate
    return Path()


def _resolve_flows(
    network: SecureNetwork,
    sla: SlaPolicy,
    flows: dict[str, FlowState],
    churn_minimizing: bool,
) -> dict[str, FlowState]:
    """Re-derive requirement and placement for every known flow."""
    wp = all_pairs_widest(network)
    resolved: dict[str, FlowState] = {}
    for flow_id, flow in flows.items():
        requirement = min_security(sla, flow.fields)
        if churn_minimizing and _feasible(network, flow.path, requirement):
            path = flow.path
        else:
            path = _place(network, wp, flow.origin, flow.destination, requirement)
        resolved[flow_id] = replace(flow, requirement=requirement, path=path)
    return resolved


def _build_rules(
    state_flows: dict[str, FlowState], devices: Iterable[NodeId]
) -> dict[NodeId, tuple[ForwardingRule, ...]]:
    tables: dict[NodeId, list[ForwardingRule]] = {device: [] for device in devices}
    for flow in state_flows.values():
        for src, dst in flow.path.edges:
            tables[src].append(ForwardingRule(src, flow.fields, (src, dst), flow.flow_id))
    return {device: tuple(rules) for device, rules in tables.items()}


def _rule_diff(
    old: dict[NodeId, tuple[ForwardingRule, ...]],
    new: dict[NodeId, tuple[ForwardingRule, ...]],
) -> list[RuleChange]:
    old_set = {rule for table in old.values() for rule in table}
    new_set = {rule for table in new.values() for rule in table}
    key = lambda r: (r.flow_id, r.device, r.out_edge)
    withdrawn = sorted(old_set - new_set, key=key)
    installed = sorted(new_set - old_set, key=key)
    return [RuleChange("withdraw", r) for r in withdrawn] + [
        RuleChange("install", r) for r in installed
    ]


def initial_state(
    network: SecureNetwork,
    sla: SlaPolicy = SlaPolicy(),
    hosts: Iterable[Host] = (),
    preload: Iterable[Flow] = (),
    churn_minimizing: bool = True,
) -> DataplaneState:
    """Version-0 state with any preloaded request flows already placed.

    Preloaded flows carry their endpoints explicitly (request-file style);
    their headers must still parse so the dataplane has match fields.
    """
    flows: dict[str, FlowState] = {}
    for flow in preload:
        if flow.flow_id in flows:
            raise OrchestratorError(f"duplicate preloaded flow id {flow.flow_id!r}")
        for endpoint in (flow.origin, flow.destination):
            if not network.has_node(endpoint):
                raise OrchestratorError(
                    f"flow {flow.flow_id!r}: endpoint {endpoint!r} not in network"
                )
        fields = parse_header(flow.header)
        flows[flow.flow_id] = FlowState(
            flow.flow_id, flow.origin, flow.destination, flow.header, fields, 0, Path()
        )
    flows = _resolve_flows(network, sla, flows, churn_minimizing=False)
    return DataplaneState(
        network=network,
        sla=sla,
        hosts=tuple(hosts),
        flows=flows,
        rules=_build_rules(flows, network.nodes),
        version=0,
        flow_seq=1,
        churn_minimizing=churn_minimizing,
    )


def handle_event(
    state: DataplaneState, event: NetworkEvent
) -> tuple[DataplaneState, list[RuleChange]]:
    """Apply one event and return the new state plus the rule diff.

    Topology and SLA events rebuild the network view and re-place all known
    flows; a packet-in classifies and places just the new flow. The version
    counter advances by exactly one per processed event.
    """
    network = state.network
    sla = state.sla
    flows = state.flows
    flow_seq = state.flow_seq
    payload = event.payload
    reresolve = True

    if event.kind is EventKind.DEVICE_UP:
        network = network.add_node(_str_field(payload, "node"))
    elif event.kind is EventKind.DEVICE_DOWN:
        network = network.remove_node(_str_field(payload, "node"))
    elif event.kind is EventKind.LINK_UP:
        network = network.add_link(
            _str_field(payload, "src"), _str_field(payload, "dst"), _level_field(payload)
        )
    elif event.kind is EventKind.LINK_DOWN:
        network = network.remove_link(_str_field(payload, "src"), _str_field(payload, "dst"))
    elif event.kind is EventKind.LINK_SECURITY_CHANGED:
        network = network.with_link_level(
            _str_field(payload, "src"), _str_field(payload, "dst"), _level_field(payload)
        )
    elif event.kind is EventKind.SLA_UPDATED:
        sla = load_sla(_str_field(payload, "csv"))
    elif event.kind is EventKind.PACKET_IN:
        flows, flow_seq = _handle_packet_in(state, payload)
        reresolve = False
    else:  # pragma: no cover - exhaustive over EventKind
        raise OrchestratorError(f"unhandled event kind {event.kind}")

    if reresolve:
        flows = _resolve_flows(network, sla, flows, state.churn_minimizing)
    rules = _build_rules(flows, network.nodes)
    new_state = replace(
        state,
        network=network,
        sla=sla,
        flows=flows,
        rules=rules,
        version=state.version + 1,
        flow_seq=flow_seq,
    )
    return new_state, _rule_diff(state.rules, rules)


def _str_field(payload: dict, key: str) -> str:
    value = payload.get(key)
    if not isinstance(value, str) or not value:
        raise OrchestratorError(f"event payload needs a non-empty {key!r}")
    return value


def _level_field(payload: dict) -> int:
    value = payload.get("level")
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise OrchestratorError(f"event payload needs a nonnegative integer level, got {value!r}")
    return value


def _handle_packet_in(
    state: DataplaneState, payload: dict
) -> tuple[dict[str, FlowState], int]:
    fields = parse_header(_str_field(payload, "header"))
    src_host = state.host_for_ip(fields.src_addr)
    dst_host = state.host_for_ip(fields.dst_addr)
    if src_host is None:
        raise OrchestratorError(f"packet-in from unknown host {fields.src_addr}")
    if dst_host is None:
        raise OrchestratorError(f"packet-in toward unknown host {fields.dst_addr}")
    ingress = payload.get("ingress")
    if ingress is not None and ingress != src_host.switch:
        raise OrchestratorError(
            f"packet-in ingress {ingress!r} does not match attachment "
            f"point {src_host.switch!r} of {src_host.name}"
        )
    origin, destination = src_host.switch, dst_host.switch
    if origin == destination:
        raise OrchestratorError(
            f"hosts {src_host.name} and {dst_host.name} share switch {origin!r}; "
            "no fabric path to compute"
        )
    for flow in state.flows.values():
        if (flow.origin, flow.destination, flow.fields) == (origin, destination, fields):
            return state.flows, state.flow_seq  # known flow, decision stands

    header = _str_field(payload, "header")
    requirement = min_security(state.sla, fields)
    wp = all_pairs_widest(state.network)
    path = _place(state.network, wp, origin, destination, requirement)
    flow_id = f"pkt{state.flow_seq}"
    flows = dict(state.flows)
    flows[flow_id] = FlowState(flow_id, origin, destination, header, fields, requirement, path)
    return flows, state.flow_seq + 1


def inject_packet(
    state: DataplaneState, header: str, ingress: NodeId, tick: int = 0
) -> TraceResult:
    """Walk the rule tables for one packet starting at ``ingress``.

    Delivered when the walk ends at the attachment switch of the packet's
    destination address; dropped otherwise. Any table miss also yields the
    packet-in event the dataplane would raise. A walk exceeding |V| hops
    raises ForwardingLoopError instead of looping silently.
    """
    fields = parse_header(header)
    if not state.network.has_node(ingress):
        raise OrchestratorError(f"unknown ingress {ingress!r}")
    nodes: list[NodeId] = [ingress]
    current = ingress
    missed = False
    for _ in range(state.network.node_count + 1):
        rule = next(
            (r for r in state.rules.get(current, ()) if r.match == fields), None
        )
        if rule is None:
            missed = True
            break
        current = rule.out_edge[1]
        nodes.append(current)
    else:
        raise ForwardingLoopError(
            f"packet from {ingress!r} still forwarding after {state.network.node_count} hops"
        )
    dst_host = state.host_for_ip(fields.dst_addr)
    if dst_host is not None and current == dst_host.switch and len(nodes) > 1:
        return TraceResult("delivered", tuple(nodes))
    packet_in = None
    if missed:
        packet_in = NetworkEvent(
            EventKind.PACKET_IN, {"header": header, "ingress": current}, tick
        )
    return TraceResult("dropped", tuple(nodes), packet_in)


def safety_violations(state: DataplaneState) -> list[str]:
    """Check the live invariants; an empty list means the state is sound.

    Admitted paths must be connected, simple, and entirely on links at least
    as secure as their flow's requirement; rule tables must hold exactly the
    rules of admitted paths and nothing else.
    """
    problems: list[str] = []
    expected: set[ForwardingRule] = set()
    for flow in state.flows.values():
        if not flow.admitted:
            continue
        nodes = flow.path.nodes
        if nodes[0] != flow.origin or nodes[-1] != flow.destination:
            problems.append(f"{flow.flow_id}: path endpoints disagree with flow")
        if len(set(nodes)) != len(nodes):
            problems.append(f"{flow.flow_id}: path is not simple")
        for src, dst in flow.path.edges:
            if not state.network.has_edge(src, dst):
                problems.append(f"{flow.flow_id}: path uses missing link {src}->{dst}")
            elif state.network.level(src, dst) < flow.requirement:
                problems.append(
                    f"{flow.flow_id}: link {src}->{dst} level "
                    f"{state.network.level(src, dst)} below requirement {flow.requirement}"
                )
            expected.add(ForwardingRule(src, flow.fields, (src, dst), flow.flow_id))
    installed = {rule for table in state.rules.values() for rule in table}
    for rule in installed - expected:
        problems.append(f"orphan rule on {rule.device} for flow {rule.flow_id}")
    for rule in expected - installed:
        problems.append(f"missing rule on {rule.device} for flow {rule.flow_id}")
    return problems


def replay(
    state: DataplaneState, events: Iterable[NetworkEvent]
) -> tuple[DataplaneState, list[list[RuleChange]]]:
    """Fold an event sequence over a state, collecting per-event rule diffs."""
    diffs: list[list[RuleChange]] = []
    for event in events:
        state, changes = handle_event(state, event)
        diffs.append(changes)
    return state, diffs


# Event log files: one JSON object per line, {"tick", "kind", "payload"}.

def dump_event_log(events: Iterable[NetworkEvent]) -> str:
    lines = [
        json.dumps(
            {"tick": e.tick, "kind": e.kind.value, "payload": e.payload},
            sort_keys=True,
        )
        for e in events
    ]
    return "\n".join(lines) + "\n" if lines else ""


def load_event_log(text: str) -> list[NetworkEvent]:
    events: list[NetworkEvent] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            events.append(
                NetworkEvent(
                    kind=EventKind(record["kind"]),
                    payload=record["payload"],
                    tick=int(record["tick"]),
                )
            )
        except (KeyError, ValueError) as exc:
            raise OrchestratorError(f"event log line {lineno}: {exc}") from None
    return events


def dump_rule_diff_log(diffs: Iterable[tuple[int, list[RuleChange]]]) -> str:
    """Serialize (tick, changes) pairs as JSON lines, one entry per event."""
    lines = []
    for tick, changes in diffs:
        lines.append(
            json.dumps(
                {
                    "tick": tick,
                    "changes": [
                        {
                            "action": c.action,
                            "device": c.rule.device,
                            "flow_id": c.rule.flow_id,
                            "out_src": c.rule.out_edge[0],
                            "out_dst": c.rule.out_edge[1],
                        }
                        for c in changes
                    ],
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + "\n" if lines else ""
