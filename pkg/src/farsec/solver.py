"""Flow admission and path assignment.

Each flow is admitted onto the precomputed widest path between its endpoints
when that path's bottleneck meets the flow's minimum security requirement;
otherwise it is mapped to the empty path, meaning the traffic is dropped
rather than sent over links weaker than required. Flows sharing endpoints
always share one path.

The requirement function is injected, so callers decide whether requirements
come from an SLA policy, a fixed table, or anything else keyed on the raw
packet header.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .network import (
    EMPTY_PATH,
    INFINITY,
    NodeId,
    Path,
    SecureNetwork,
    path_bottleneck,
)
from .widest import all_pairs_widest

REQUESTS_HEADER = "FlowID,Source,Destination,Header"
MAPPING_HEADER = "FlowID,Admitted,Path"

_HEX_DIGITS = frozenset("0123456789abcdefABCDEF")


class FlowError(ValueError):
    """Malformed flow, request file, or solve input."""


@dataclass(frozen=True)
class Flow:
    """One traffic stream: endpoints plus the raw packet header (hex)."""

    flow_id: str
    origin: NodeId
    destination: NodeId
    header: str

    def __post_init__(self) -> None:
        if not self.flow_id:
            raise FlowError("flow id must be non-empty")
        if not self.origin or not self.destination:
            raise FlowError(f"flow {self.flow_id!r}: endpoints must be non-empty")
        if self.origin == self.destination:
            raise FlowError(
                f"flow {self.flow_id!r}: origin and destination must differ"
            )
        if not self.header:
            raise FlowError(f"flow {self.flow_id!r}: header must be non-empty")
        if len(self.header) % 2 or not set(self.header) <= _HEX_DIGITS:
            raise FlowError(f"flow {self.flow_id!r}: header must be even-length hex")


def solve(
    net: SecureNetwork,
    flows: Iterable[Flow],
    min_sec: Callable[[str], int],
) -> dict[str, Path]:
    """Map every flow to its widest path or to the empty path (drop).

    ``min_sec`` turns a raw header into the flow's minimum security level. A
    flow is admitted exactly when that level is at most the bottleneck of the
    stored widest path between its endpoints; unreachable pairs have an empty
    stored path, so such flows come out dropped either way. Deterministic:
    identical inputs produce identical mappings.
    """
    wp = all_pairs_widest(net)
    n = net.node_count
    # Recomputed from the reconstructed paths on purpose (dedicated, reusable
    # bottleneck routine); must agree with the sweep's own matrix wherever a
    # path exists.
    bottleneck = [
        [path_bottleneck(net, wp.paths[i][j]) for j in range(n)] for i in range(n)
    ]
    if __debug__:
        for i, origin in enumerate(net.nodes):
            for j, destination in enumerate(net.nodes):
                if wp.paths[i][j] or i == j:
                    assert bottleneck[i][j] == wp.bottleneck(origin, destination)
                else:
                    assert bottleneck[i][j] == INFINITY

    mapping: dict[str, Path] = {}
    for flow in flows:
        if flow.flow_id in mapping:
            raise FlowError(f"duplicate flow id {flow.flow_id!r}")
        for endpoint in (flow.origin, flow.destination):
            if not net.has_node(endpoint):
                raise FlowError(
                    f"flow {flow.flow_id!r}: endpoint {endpoint!r} not in network"
                )
        i = net.index_of(flow.origin)
        j = net.index_of(flow.destination)
        if min_sec(flow.header) <= bottleneck[i][j]:
            mapping[flow.flow_id] = wp.paths[i][j]
        else:
            mapping[flow.flow_id] = EMPTY_PATH
    return mapping


def load_requests(text: str) -> list[Flow]:
    """Parse a requests CSV (``FlowID,Source,Destination,Header``).

    Header fields are kept verbatim (case included) so a loaded file can be
    re-serialized byte for byte; they are validated as even-length hex but
    not decoded here.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines or lines[0] != REQUESTS_HEADER:
        raise FlowError(f"requests file must start with {REQUESTS_HEADER!r}")
    flows: list[Flow] = []
    seen: set[str] = set()
    for lineno, row in enumerate(lines[1:], start=2):
        parts = row.split(",")
        if len(parts) != 4:
            raise FlowError(f"requests line {lineno}: expected 4 fields, got {len(parts)}")
        flow_id, origin, destination, header = parts
        if flow_id in seen:
            raise FlowError(f"requests line {lineno}: duplicate flow id {flow_id!r}")
        seen.add(flow_id)
        try:
            flows.append(Flow(flow_id, origin, destination, header))
        except FlowError as exc:
            raise FlowError(f"requests line {lineno}: {exc}") from None
    return flows


def dump_requests(flows: Iterable[Flow]) -> str:
    """Serialize flows back to the requests CSV format (trailing newline)."""
    rows = [REQUESTS_HEADER]
    rows.extend(f"{f.flow_id},{f.origin},{f.destination},{f.header}" for f in flows)
    return "\n".join(rows) + "\n"


def dump_mapping(flows: Iterable[Flow], mapping: dict[str, Path]) -> str:
    """Serialize a solve result, one row per flow in input order.

    ``Path`` is ``-`` for dropped flows, otherwise the ``|``-joined node
    sequence of the assigned path.
    """
    rows = [MAPPING_HEADER]
    for flow in flows:
        path = mapping[flow.flow_id]
        if path:
            rows.append(f"{flow.flow_id},true,{'|'.join(path.nodes)}")
        else:
            rows.append(f"{flow.flow_id},false,-")
    return "\n".join(rows) + "\n"
