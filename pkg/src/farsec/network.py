"""Secure network data model.

A network is a directed graph whose every link carries a nonnegative integer
security level (0 = unprotected, higher = stronger scheme). Levels are plain
integers under the usual total order, which is what makes "at least as secure
as" comparisons well defined. The two directions between a node pair are
independent links and may carry different levels.

Networks are immutable values: topology changes build new instances, so a
network can be shared across threads and kept as a versioned snapshot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

NodeId = str
Edge = tuple[NodeId, NodeId]

INFINITY = math.inf
"""Bottleneck of the empty path; strictly above every finite security level."""

RESOURCES_HEADER = "Source,Destination,Security"


class NetworkError(ValueError):
    """Malformed network, link, path, or resources file."""


@dataclass(frozen=True)
class Path:
    """A sequence of directed edges; the empty sequence means "no path"."""

    edges: tuple[Edge, ...] = ()

    @classmethod
    def from_nodes(cls, nodes: Iterable[NodeId]) -> "Path":
        """Build a path from the node sequence it traverses."""
        seq = list(nodes)
        return cls(tuple((seq[i], seq[i + 1]) for i in range(len(seq) - 1)))

    @property
    def nodes(self) -> tuple[NodeId, ...]:
        """Node sequence of the path, empty for the empty path."""
        if not self.edges:
            return ()
        return (self.edges[0][0],) + tuple(e[1] for e in self.edges)

    def __bool__(self) -> bool:
        return bool(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)


EMPTY_PATH = Path()


@dataclass(frozen=True)
class SecureNetwork:
    """Directed graph with one security level per directed link.

    ``nodes`` keeps insertion order; that order doubles as the stable matrix
    index used by the path solvers. ``levels`` maps each directed link to its
    security level and likewise preserves insertion order, which is what the
    resources serializer emits.
    """

    nodes: tuple[NodeId, ...]
    levels: dict[Edge, int]
    _index: dict[NodeId, int] = field(init=False, repr=False, compare=False)
    _out: dict[NodeId, tuple[NodeId, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index: dict[NodeId, int] = {}
        for name in self.nodes:
            if not name:
                raise NetworkError("node ids must be non-empty strings")
            if name in index:
                raise NetworkError(f"duplicate node id {name!r}")
            index[name] = len(index)
        out: dict[NodeId, list[NodeId]] = {name: [] for name in self.nodes}
        for (src, dst), level in self.levels.items():
            if src not in index:
                raise NetworkError(f"link source {src!r} is not a known node")
            if dst not in index:
                raise NetworkError(f"link destination {dst!r} is not a known node")
            if src == dst:
                raise NetworkError(f"self-loop link on {src!r}")
            if not isinstance(level, int) or level < 0:
                raise NetworkError(
                    f"link ({src!r}, {dst!r}) needs a nonnegative integer level, got {level!r}"
                )
            out[src].append(dst)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_out", {u: tuple(vs) for u, vs in out.items()})

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self.levels.keys())

    def has_node(self, node: NodeId) -> bool:
        return node in self._index

    def has_edge(self, src: NodeId, dst: NodeId) -> bool:
        return (src, dst) in self.levels

    def index_of(self, node: NodeId) -> int:
        """Stable matrix index of a node (insertion order)."""
        try:
            return self._index[node]
        except KeyError:
            raise NetworkError(f"unknown node {node!r}") from None

    def level(self, src: NodeId, dst: NodeId) -> int:
        try:
            return self.levels[(src, dst)]
        except KeyError:
            raise NetworkError(f"no link ({src!r}, {dst!r}) in network") from None

    def out_neighbors(self, node: NodeId) -> tuple[NodeId, ...]:
        if node not in self._index:
            raise NetworkError(f"unknown node {node!r}")
        return self._out[node]

    # Functional updates. Each returns a new network and leaves self intact.

    def with_link_level(self, src: NodeId, dst: NodeId, level: int) -> "SecureNetwork":
        """Same topology with one existing link set to a new level."""
        if (src, dst) not in self.levels:
            raise NetworkError(f"no link ({src!r}, {dst!r}) in network")
        levels = dict(self.levels)
        levels[(src, dst)] = level
        return SecureNetwork(self.nodes, levels)

    def add_link(self, src: NodeId, dst: NodeId, level: int) -> "SecureNetwork":
        if (src, dst) in self.levels:
            raise NetworkError(f"duplicate link ({src!r}, {dst!r})")
        levels = dict(self.levels)
        levels[(src, dst)] = level
        return SecureNetwork(self.nodes, levels)

    def remove_link(self, src: NodeId, dst: NodeId) -> "SecureNetwork":
        if (src, dst) not in self.levels:
            raise NetworkError(f"no link ({src!r}, {dst!r}) in network")
        levels = {e: lvl for e, lvl in self.levels.items() if e != (src, dst)}
        return SecureNetwork(self.nodes, levels)

    def add_node(self, node: NodeId) -> "SecureNetwork":
        if node in self._index:
            raise NetworkError(f"duplicate node id {node!r}")
        return SecureNetwork(self.nodes + (node,), dict(self.levels))

    def remove_node(self, node: NodeId) -> "SecureNetwork":
        """Drop a node together with all its incident links."""
        if node not in self._index:
            raise NetworkError(f"unknown node {node!r}")
        nodes = tuple(n for n in self.nodes if n != node)
        levels = {
            (u, v): lvl for (u, v), lvl in self.levels.items() if u != node and v != node
        }
        return SecureNetwork(nodes, levels)


def build_network(
    nodes: Iterable[NodeId], links: Iterable[tuple[NodeId, NodeId, int]]
) -> SecureNetwork:
    """Assemble and validate a network from node and link listings.

    Duplicate (src, dst) entries, self-loops, unknown endpoints and negative
    levels are all rejected.
    """
    levels: dict[Edge, int] = {}
    for src, dst, level in links:
        if (src, dst) in levels:
            raise NetworkError(f"duplicate link ({src!r}, {dst!r})")
        levels[(src, dst)] = level
    return SecureNetwork(tuple(nodes), levels)


def path_is_valid_simple(
    net: SecureNetwork, path: Path, origin: NodeId, destination: NodeId
) -> bool:
    """True iff the path is connected origin -> destination and visits no node twice.

    The empty path is the "no path" marker and is never valid here. Every
    edge must exist in the network, otherwise NetworkError is raised.
    """
    for src, dst in path.edges:
        if not net.has_edge(src, dst):
            raise NetworkError(f"path edge ({src!r}, {dst!r}) not in network")
    if not path.edges:
        return False
    for prev, nxt in zip(path.edges, path.edges[1:]):
        if prev[1] != nxt[0]:
            return False
    if path.edges[0][0] != origin or path.edges[-1][1] != destination:
        return False
    seen = path.nodes
    return len(set(seen)) == len(seen)


def path_bottleneck(net: SecureNetwork, path: Path) -> int | float:
    """Smallest level along the path; INFINITY for the empty path."""
    if not path.edges:
        return INFINITY
    return min(net.level(src, dst) for src, dst in path.edges)


def _canonical_int(text: str, what: str) -> int:
    """Parse a nonnegative integer written without sign, spaces or leading zeros."""
    if not text.isascii() or not text.isdigit() or (len(text) > 1 and text[0] == "0"):
        raise NetworkError(f"{what} must be a canonical nonnegative integer, got {text!r}")
    return int(text)


def load_resources(text: str) -> SecureNetwork:
    """Parse a resources CSV (``Source,Destination,Security``) into a network.

    Rows are strictly directed; the reverse link must be listed explicitly if
    it exists. Nodes are indexed in order of first appearance. The format is
    strict: exact header line, three bare fields per row, no quoting and no
    whitespace tolerance beyond a single trailing newline.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines or lines[0] != RESOURCES_HEADER:
        raise NetworkError(f"resources file must start with {RESOURCES_HEADER!r}")
    nodes: list[NodeId] = []
    seen_nodes: set[NodeId] = set()
    links: list[tuple[NodeId, NodeId, int]] = []
    for lineno, row in enumerate(lines[1:], start=2):
        parts = row.split(",")
        if len(parts) != 3:
            raise NetworkError(f"resources line {lineno}: expected 3 fields, got {len(parts)}")
        src, dst, level_text = parts
        if not src or not dst:
            raise NetworkError(f"resources line {lineno}: empty endpoint")
        if any(ch.isspace() for ch in src + dst):
            raise NetworkError(f"resources line {lineno}: whitespace in node id")
        level = _canonical_int(level_text, f"resources line {lineno}: security level")
        for name in (src, dst):
            if name not in seen_nodes:
                seen_nodes.add(name)
                nodes.append(name)
        links.append((src, dst, level))
    return build_network(nodes, links)


def dump_resources(net: SecureNetwork) -> str:
    """Serialize a network to the resources CSV format (trailing newline).

    Links are written in insertion order, so load -> dump round-trips a
    well-formed file byte for byte. Isolated nodes cannot be expressed in
    this format and are dropped.
    """
    rows = [RESOURCES_HEADER]
    rows.extend(f"{src},{dst},{level}" for (src, dst), level in net.levels.items())
    return "\n".join(rows) + "\n"
