"""All-pairs widest (maximum-bottleneck) paths.

For every ordered node pair the solver finds a path maximizing the smallest
security level along the way. It is a Floyd-Warshall sweep over the
(max, min) semiring: path quality is the minimum link level and better means
larger. Next hops are recorded on strict improvements only, which keeps
tie-breaking deterministic (the first optimal path in scan order wins) and
keeps path reconstruction loop-free.

Internally "no path yet" is a sentinel strictly below level 0 so that paths
whose bottleneck is 0 are still discovered; externally unreachable pairs read
as bottleneck 0 with a null next hop, and the reconstructed path (empty or
not) is the authoritative reachability signal.

``oracle_widest`` is an intentionally naive enumerator of all simple paths,
kept as an independent cross-check for the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .network import (
    EMPTY_PATH,
    INFINITY,
    Edge,
    NetworkError,
    NodeId,
    Path,
    SecureNetwork,
)

_DIAG = 2**62  # stands in for the infinite diagonal entries
_NONE = -1  # no path discovered: strictly below every real level


@dataclass(frozen=True, eq=False)
class WidestPathsResult:
    """Widest-path matrices for one network snapshot.

    ``omega`` holds raw bottleneck values (``bottleneck`` applies the exposed
    convention), ``next_hop`` the successor matrix paths are rebuilt from,
    and ``paths`` the reconstructed edge sequences, empty on the diagonal and
    for unreachable pairs.
    """

    nodes: tuple[NodeId, ...]
    omega: np.ndarray
    next_hop: np.ndarray
    paths: tuple[tuple[Path, ...], ...]
    _index: dict[NodeId, int] = field(repr=False)

    def _at(self, origin: NodeId, destination: NodeId) -> tuple[int, int]:
        try:
            return self._index[origin], self._index[destination]
        except KeyError as exc:
            raise NetworkError(f"unknown node {exc.args[0]!r}") from None

    def bottleneck(self, origin: NodeId, destination: NodeId) -> int | float:
        """Widest bottleneck level; INFINITY on the diagonal, 0 when unreachable."""
        i, j = self._at(origin, destination)
        value = int(self.omega[i, j])
        if value == _DIAG:
            return INFINITY
        return 0 if value == _NONE else value

    def hop(self, origin: NodeId, destination: NodeId) -> NodeId | None:
        """First hop of the stored widest path, or None when no path exists."""
        i, j = self._at(origin, destination)
        successor = int(self.next_hop[i, j])
        return None if successor < 0 else self.nodes[successor]

    def path(self, origin: NodeId, destination: NodeId) -> Path:
        i, j = self._at(origin, destination)
        return self.paths[i][j]


def all_pairs_widest(net: SecureNetwork) -> WidestPathsResult:
    """Run the modified Floyd-Warshall sweep and reconstruct all paths.

    Total on valid networks. The diagonal is initialized to the infinite
    sentinel with each node as its own successor; pairs never reached keep a
    null successor and an empty path.
    """
    n = net.node_count
    omega = np.full((n, n), _NONE, dtype=np.int64)
    nxt = np.full((n, n), -1, dtype=np.int64)
    for (src, dst), level in net.levels.items():
        i, j = net.index_of(src), net.index_of(dst)
        omega[i, j] = level
        nxt[i, j] = j
    diag = np.arange(n)
    omega[diag, diag] = _DIAG
    nxt[diag, diag] = diag
    for k in range(n):
        # Row k and column k are fixed points of sweep k, so the whole sweep
        # can be evaluated against the pre-sweep matrices at once.
        candidate = np.minimum(omega[:, k, None], omega[None, k, :])
        better = omega < candidate
        if better.any():
            omega = np.where(better, candidate, omega)
            nxt = np.where(better, nxt[:, k, None], nxt)
    paths = _reconstruct(net, nxt)
    omega.setflags(write=False)
    nxt.setflags(write=False)
    return WidestPathsResult(
        nodes=tuple(net.nodes),
        omega=omega,
        next_hop=nxt,
        paths=paths,
        _index={name: i for i, name in enumerate(net.nodes)},
    )


def _reconstruct(net: SecureNetwork, nxt: np.ndarray) -> tuple[tuple[Path, ...], ...]:
    """Walk the successor matrix into concrete per-pair paths.

    A consistent successor matrix terminates in under |V| hops; anything else
    is a solver bug and raises rather than returning a bogus path.
    """
    n = net.node_count
    names = net.nodes
    rows: list[tuple[Path, ...]] = []
    for i in range(n):
        row: list[Path] = []
        for j in range(n):
            if i == j or nxt[i, j] < 0:
                row.append(EMPTY_PATH)
                continue
            edges: list[Edge] = []
            current = i
            for _ in range(n):
                successor = int(nxt[current, j])
                if successor < 0:
                    raise RuntimeError(
                        f"inconsistent next-hop matrix at {names[current]!r}->{names[j]!r}"
                    )
                edges.append((names[current], names[successor]))
                current = successor
                if current == j:
                    break
            else:
                raise RuntimeError(
                    f"next-hop walk exceeded {n} hops for {names[i]!r}->{names[j]!r}"
                )
            row.append(Path(tuple(edges)))
        rows.append(tuple(row))
    return tuple(rows)


def oracle_widest_from(
    net: SecureNetwork, origin: NodeId
) -> dict[NodeId, tuple[int, Path]]:
    """Best bottleneck and one witness path per destination, by brute force.

    Enumerates every simple path out of ``origin`` with a depth-first walk;
    exponential, only meant for small test networks. Destinations with no
    path at all are absent from the result.
    """
    if not net.has_node(origin):
        raise NetworkError(f"unknown node {origin!r}")
    best: dict[NodeId, tuple[int, Path]] = {}
    trail: list[Edge] = []
    visited = {origin}

    def walk(node: NodeId, smallest: int | float) -> None:
        for neighbor in net.out_neighbors(node):
            if neighbor in visited:
                continue
            here = min(smallest, net.level(node, neighbor))
            trail.append((node, neighbor))
            known = best.get(neighbor)
            if known is None or here > known[0]:
                best[neighbor] = (here, Path(tuple(trail)))
            visited.add(neighbor)
            walk(neighbor, here)
            visited.remove(neighbor)
            trail.pop()

    walk(origin, INFINITY)
    return best


def oracle_widest(
    net: SecureNetwork, origin: NodeId, destination: NodeId
) -> tuple[int | float, Path]:
    """Exhaustive widest-path search for one pair.

    Returns (INFINITY, empty) on the diagonal and (0, empty) when the
    destination is unreachable, mirroring the solver's exposed conventions.
    """
    if not net.has_node(destination):
        raise NetworkError(f"unknown node {destination!r}")
    if origin == destination:
        if not net.has_node(origin):
            raise NetworkError(f"unknown node {origin!r}")
        return INFINITY, EMPTY_PATH
    return oracle_widest_from(net, origin).get(destination, (0, EMPTY_PATH))
