"""Shared fixtures: the 4-node worked example, verbatim file corpora, and the
demo controller setup used across the suite."""

from __future__ import annotations

from ipaddress import IPv4Address

import pytest

from farsec import Flow, Host, SecureNetwork, build_network, build_header, load_sla
from farsec.sla import UDP

# 4-node example network (levels read off the topology figure; direction
# matters, e.g. N1->N3 is 1 while N3->N1 is 2).
EXAMPLE_NODES = ("N1", "N2", "N3", "N4")
EXAMPLE_LINKS = (
    ("N1", "N2", 2),
    ("N1", "N3", 1),
    ("N1", "N4", 3),
    ("N2", "N1", 1),
    ("N2", "N3", 1),
    ("N2", "N4", 0),
    ("N3", "N1", 2),
    ("N3", "N2", 1),
    ("N3", "N4", 3),
    ("N4", "N1", 0),
    ("N4", "N2", 3),
    ("N4", "N3", 2),
)

# The example flow table: header bits, endpoints, minimum security level.
EXAMPLE_FLOWS = (
    ("0001", "N1", "N2", 3),
    ("0010", "N2", "N4", 2),
    ("0011", "N3", "N2", 1),
    ("0100", "N4", "N1", 2),
)

# Expected solution: admitted flows with their unique widest paths.
EXAMPLE_SOLUTION = {
    "0001": ("N1", "N4", "N2"),
    "0010": None,
    "0011": ("N3", "N4", "N2"),
    "0100": ("N4", "N3", "N1"),
}

RESOURCES_SAMPLE = "Source,Destination,Security\ns1,s2,1\ns1,s3,3\ns2,s3,2\n"

REQUESTS_SAMPLE = (
    "FlowID,Source,Destination,Header\n"
    "600309120,s1,s3,"
    "450000140000000000013597c0a80101c0a803010008fff700000000000000000000000000000000\n"
)

SLA_SAMPLE = (
    "Protocol,SourceAddress,DestinationAddress,DSCP,"
    "SourcePortMin,SourcePortMax,DestinationPortMin,DestinationPortMax,MinSec\n"
    "UDP,0.0.0.0/0,0.0.0.0/0,0,0,65535,5000,5005,2\n"
    "TCP,192.168.1.0/24,192.168.2.0/24,0,0,65535,22,22,4\n"
)


@pytest.fixture
def example_network() -> SecureNetwork:
    return build_network(EXAMPLE_NODES, EXAMPLE_LINKS)


@pytest.fixture
def example_flows() -> list[Flow]:
    return [Flow(fid, o, d, fid) for fid, o, d, _ in EXAMPLE_FLOWS]


@pytest.fixture
def example_min_sec():
    table = {fid: req for fid, _, _, req in EXAMPLE_FLOWS}
    return lambda header: table[header]


# Demo controller setup: two disjoint two-hop branches between s1 and s3,
# every link at level 4, and a policy putting UDP ports 5000-5005 at level 3.

DEMO_RESOURCES = (
    "Source,Destination,Security\n"
    "s1,s2,4\ns2,s1,4\ns2,s3,4\ns3,s2,4\n"
    "s1,s4,4\ns4,s1,4\ns4,s3,4\ns3,s4,4\n"
)

DEMO_HOSTS = (
    Host("h1", "s1", IPv4Address("192.168.1.1")),
    Host("h2", "s2", IPv4Address("192.168.2.1")),
    Host("h3", "s3", IPv4Address("192.168.3.1")),
)

DEMO_SLA = (
    "Protocol,SourceAddress,DestinationAddress,DSCP,"
    "SourcePortMin,SourcePortMax,DestinationPortMin,DestinationPortMax,MinSec\n"
    "UDP,0.0.0.0/0,0.0.0.0/0,0,0,65535,5000,5005,3\n"
)


def demo_flow_header(dst_port: int, src_port: int = 40000) -> str:
    return build_header(
        UDP, "192.168.1.1", "192.168.3.1", src_port=src_port, dst_port=dst_port
    )


@pytest.fixture
def demo_policy():
    return load_sla(DEMO_SLA)


# Example network rebuilt for the controller: one host per switch and the
# flow table's requirements encoded in destination ports (header strings like
# "0001" are too short to classify, so the controller variant carries real
# packets that classify to the same levels).

EXAMPLE_HOST_IPS = {name: f"10.0.{i + 1}.1" for i, name in enumerate(EXAMPLE_NODES)}

EXAMPLE_HOSTS = tuple(
    Host(f"h{name}", name, IPv4Address(ip)) for name, ip in EXAMPLE_HOST_IPS.items()
)

EXAMPLE_PORT_SLA = (
    "Protocol,SourceAddress,DestinationAddress,DSCP,"
    "SourcePortMin,SourcePortMax,DestinationPortMin,DestinationPortMax,MinSec\n"
    "UDP,0.0.0.0/0,0.0.0.0/0,0,0,65535,20001,20001,1\n"
    "UDP,0.0.0.0/0,0.0.0.0/0,0,0,65535,20002,20002,2\n"
    "UDP,0.0.0.0/0,0.0.0.0/0,0,0,65535,20003,20003,3\n"
)


def example_packet(flow_id: str) -> str:
    """IPv4/UDP equivalent of one example flow, port-encoding its requirement."""
    spec = {fid: (o, d, req) for fid, o, d, req in EXAMPLE_FLOWS}
    origin, destination, requirement = spec[flow_id]
    return build_header(
        UDP,
        EXAMPLE_HOST_IPS[origin],
        EXAMPLE_HOST_IPS[destination],
        src_port=30000 + int(flow_id, 2),
        dst_port=20000 + requirement,
    )
