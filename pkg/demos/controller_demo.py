"""Live controller scenario: admit, reroute on downgrade, withdraw, recover.

Two UDP video flows from h1 (on s1) to h3 (on s3) need level 3. The fabric
has two disjoint branches s1-s2-s3 and s1-s4-s3, all links at level 4. We
then downgrade links one by one and watch the controller keep the flows on
sufficiently secure paths for as long as any exist.
"""

from ipaddress import IPv4Address

from farsec import (
    EventKind,
    Host,
    NetworkEvent,
    build_header,
    handle_event,
    initial_state,
    inject_packet,
    load_resources,
    load_sla,
    safety_violations,
)
from farsec.sla import UDP

RESOURCES = (
    "Source,Destination,Security\n"
    "s1,s2,4\ns2,s1,4\ns2,s3,4\ns3,s2,4\n"
    "s1,s4,4\ns4,s1,4\ns4,s3,4\ns3,s4,4\n"
)

SLA = (
    "Protocol,SourceAddress,DestinationAddress,DSCP,"
    "SourcePortMin,SourcePortMax,DestinationPortMin,DestinationPortMax,MinSec\n"
    "UDP,0.0.0.0/0,0.0.0.0/0,0,0,65535,5000,5005,3\n"
)

HOSTS = (
    Host("h1", "s1", IPv4Address("192.168.1.1")),
    Host("h2", "s2", IPv4Address("192.168.2.1")),
    Host("h3", "s3", IPv4Address("192.168.3.1")),
)

video1 = build_header(UDP, "192.168.1.1", "192.168.3.1", src_port=40001, dst_port=5000)
video2 = build_header(UDP, "192.168.1.1", "192.168.3.1", src_port=40002, dst_port=5001)

state = initial_state(load_resources(RESOURCES), load_sla(SLA), HOSTS)

SCRIPT = [
    ("first video flow appears",      NetworkEvent(EventKind.PACKET_IN, {"header": video1, "ingress": "s1"}, 1)),
    ("second video flow appears",     NetworkEvent(EventKind.PACKET_IN, {"header": video2, "ingress": "s1"}, 2)),
    ("link s2->s3 drops to level 2",  NetworkEvent(EventKind.LINK_SECURITY_CHANGED, {"src": "s2", "dst": "s3", "level": 2}, 3)),
    ("link s4->s3 drops to level 2",  NetworkEvent(EventKind.LINK_SECURITY_CHANGED, {"src": "s4", "dst": "s3", "level": 2}, 4)),
    ("link s2->s3 restored to 4",     NetworkEvent(EventKind.LINK_SECURITY_CHANGED, {"src": "s2", "dst": "s3", "level": 4}, 5)),
]

for label, event in SCRIPT:
    state, changes = handle_event(state, event)
    problems = safety_violations(state)
    assert not problems, problems
    print(f"\n== {label}")
    for change in changes:
        rule = change.rule
        print(f"   {change.action:>8} on {rule.device}: {rule.flow_id} -> {rule.out_edge[1]}")
    if not changes:
        print("   (no rule changes)")
    for flow in state.flows.values():
        placement = " -> ".join(flow.path.nodes) if flow.admitted else "WITHDRAWN"
        print(f"   {flow.flow_id}: need {flow.requirement}, {placement}")
    trace = inject_packet(state, video1, "s1")
    print(f"   packet trace: {' -> '.join(trace.nodes)} [{trace.status}]")
