"""Seeded benchmark instance generation.

Topologies are double stars: a root, a first level of hub nodes below it,
and leaf groups below the hubs. Leaves are chained to their neighbors within
a group (bus) and the first hub's group is additionally fully meshed. Link
levels are drawn per tier: root-hub links from the widest range, hub-leaf
and bus links from a middle range, mesh links from a narrow one. Each
adjacency becomes two directed links with independent draws.

The flow population is sized at ``flow_multiplier`` times the sum of all
directed link levels. Every flow gets a uniformly random distinct endpoint
pair and a requirement drawn uniformly from the union of the level ranges.
The requirement is encoded in the packet's destination port, and a matching
SLA file is emitted, so solving the written CSVs reproduces the generated
requirements through normal classification.

Generation is deterministic per (config, seed): one ``random.Random(seed)``
stream consumed in a fixed documented order (link levels in adjacency order,
forward before reverse, then per flow origin, destination, requirement).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from ipaddress import IPv4Address
from pathlib import Path as FsPath
from random import Random

from .network import NodeId, SecureNetwork, build_network, dump_resources
from .sla import UDP, SlaPolicy, build_header, dump_sla, port_encoded_policy
from .solver import Flow, dump_requests

REQUIREMENT_PORT_BASE = 20000


class GenerationError(ValueError):
    """Invalid generator configuration."""


@dataclass(frozen=True)
class GenConfig:
    """Instance shape: node count, seed, per-tier level ranges, flow volume."""

    size: int
    seed: int
    level1_range: tuple[int, int] = (0, 30)
    level2_range: tuple[int, int] = (0, 10)
    level3_range: tuple[int, int] = (0, 2)
    flow_multiplier: int = 64

    def __post_init__(self) -> None:
        if self.size < 2:
            raise GenerationError(f"need at least 2 nodes, got {self.size}")
        if self.flow_multiplier < 1:
            raise GenerationError("flow_multiplier must be positive")
        for name in ("level1_range", "level2_range", "level3_range"):
            low, high = getattr(self, name)
            if low < 0 or high < low:
                raise GenerationError(f"{name} must be a nonnegative inclusive range")


@dataclass(frozen=True)
class GeneratedInstance:
    network: SecureNetwork
    flows: tuple[Flow, ...]
    requirements: dict[str, int] = field(repr=False)
    sla: SlaPolicy = field(repr=False)


def _structure(size: int) -> list[tuple[int, int, int]]:
    """Undirected adjacencies as (node index, node index, tier), in build order.

    Node 0 is the root, the next ceil(sqrt(size - 1)) nodes are hubs, the
    rest are leaves dealt round-robin to the hubs. Sizes below 4 cannot form
    three levels and degrade to a chain (root, one hub, at most one leaf).
    """
    if size < 4:
        return [(i, i + 1, min(i + 1, 2)) for i in range(size - 1)]
    root = math.isqrt(size - 1)
    hub_count = root if root * root == size - 1 else root + 1
    hubs = list(range(1, 1 + hub_count))
    leaves = list(range(1 + hub_count, size))
    groups: list[list[int]] = [[] for _ in hubs]
    for position, leaf in enumerate(leaves):
        groups[position % hub_count].append(leaf)

    adjacencies: list[tuple[int, int, int]] = []
    for hub in hubs:
        adjacencies.append((0, hub, 1))
    for hub, group in zip(hubs, groups):
        for leaf in group:
            adjacencies.append((hub, leaf, 2))
    for group in groups:
        for left, right in zip(group, group[1:]):
            adjacencies.append((left, right, 2))
    meshed = groups[0]
    for a_pos in range(len(meshed)):
        for b_pos in range(a_pos + 2, len(meshed)):  # +2 skips pairs already on the bus
            adjacencies.append((meshed[a_pos], meshed[b_pos], 3))
    return adjacencies


def _node_ip(index: int) -> str:
    return str(IPv4Address((10 << 24) | (index << 8) | 1))


def generate(cfg: GenConfig) -> GeneratedInstance:
    """Produce one deterministic instance for the given config."""
    rng = Random(cfg.seed)
    ranges = {1: cfg.level1_range, 2: cfg.level2_range, 3: cfg.level3_range}
    names: list[NodeId] = [f"s{i + 1}" for i in range(cfg.size)]

    links: list[tuple[NodeId, NodeId, int]] = []
    for a, b, tier in _structure(cfg.size):
        low, high = ranges[tier]
        links.append((names[a], names[b], rng.randint(low, high)))
        links.append((names[b], names[a], rng.randint(low, high)))
    network = build_network(names, links)

    flow_count = cfg.flow_multiplier * sum(level for _, _, level in links)
    req_low = min(r[0] for r in ranges.values())
    req_high = max(r[1] for r in ranges.values())

    flows: list[Flow] = []
    requirements: dict[str, int] = {}
    for seq in range(flow_count):
        origin = rng.randrange(cfg.size)
        destination = rng.randrange(cfg.size - 1)
        if destination >= origin:
            destination += 1
        requirement = rng.randint(req_low, req_high)
        flow_id = str(seq + 1)
        header = build_header(
            UDP,
            _node_ip(origin),
            _node_ip(destination),
            src_port=1024 + seq % 60000,
            dst_port=REQUIREMENT_PORT_BASE + requirement,
        )
        flows.append(Flow(flow_id, names[origin], names[destination], header))
        requirements[flow_id] = requirement

    sla = port_encoded_policy(requirements.values(), REQUIREMENT_PORT_BASE)
    return GeneratedInstance(network, tuple(flows), requirements, sla)


def write_instance(
    instance: GeneratedInstance, cfg: GenConfig, out_dir: str | FsPath
) -> dict[str, FsPath]:
    """Write the three CSVs, size and seed stamped into the file names."""
    out = FsPath(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"n{cfg.size}_s{cfg.seed}"
    paths = {
        "resources": out / f"resources_{stem}.csv",
        "requests": out / f"requests_{stem}.csv",
        "sla": out / f"sla_{stem}.csv",
    }
    paths["resources"].write_text(dump_resources(instance.network), newline="")
    paths["requests"].write_text(dump_requests(instance.flows), newline="")
    paths["sla"].write_text(dump_sla(instance.sla), newline="")
    return paths
