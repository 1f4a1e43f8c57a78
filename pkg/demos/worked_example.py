"""Walk through the 4-node example: widest paths, admission, and drops.

The network has asymmetric link levels (e.g. N1->N3 is weaker than N3->N1).
Four flows ask for minimum levels 3, 2, 1, 2; three get a path, one is
dropped because every route to its destination crosses a link below level 2.
"""

from farsec import Flow, all_pairs_widest, build_network, path_bottleneck, solve

NODES = ["N1", "N2", "N3", "N4"]
LINKS = [
    ("N1", "N2", 2), ("N1", "N3", 1), ("N1", "N4", 3),
    ("N2", "N1", 1), ("N2", "N3", 1), ("N2", "N4", 0),
    ("N3", "N1", 2), ("N3", "N2", 1), ("N3", "N4", 3),
    ("N4", "N1", 0), ("N4", "N2", 3), ("N4", "N3", 2),
]

FLOWS = [
    # (id, origin, destination, minimum security level)
    ("0001", "N1", "N2", 3),
    ("0010", "N2", "N4", 2),
    ("0011", "N3", "N2", 1),
    ("0100", "N4", "N1", 2),
]

net = build_network(NODES, LINKS)
print(f"network: {net.node_count} nodes, {len(net.edges)} directed links")

###############################################################################
# All-pairs widest paths: for every ordered pair, the path with the largest
# minimum link level. The matrix shows that N2 can reach N4 only at level 1.

wp = all_pairs_widest(net)
print("\nwidest bottleneck per ordered pair:")
print("      " + "  ".join(f"{d:>4}" for d in NODES))
for origin in NODES:
    cells = [f"{wp.bottleneck(origin, d):>4}" for d in NODES]
    print(f"  {origin}  " + "  ".join(cells))

print("\nwidest path N1 -> N2:", " -> ".join(wp.path("N1", "N2").nodes))
print("widest path N4 -> N1:", " -> ".join(wp.path("N4", "N1").nodes))

###############################################################################
# Flow admission: a flow is admitted exactly when the widest path between its
# endpoints is at least as secure as the flow requires; otherwise the empty
# path is assigned and the traffic is dropped rather than sent insecurely.

requirements = {fid: req for fid, _, _, req in FLOWS}
flows = [Flow(fid, o, d, fid) for fid, o, d, _ in FLOWS]
mapping = solve(net, flows, lambda header: requirements[header])

print("\nflow decisions:")
for flow in flows:
    path = mapping[flow.flow_id]
    need = requirements[flow.flow_id]
    if path:
        got = path_bottleneck(net, path)
        route = " -> ".join(path.nodes)
        print(f"  {flow.flow_id}  {flow.origin}->{flow.destination}  need {need}  "
              f"admitted via {route} (bottleneck {got})")
    else:
        print(f"  {flow.flow_id}  {flow.origin}->{flow.destination}  need {need}  DROPPED")
