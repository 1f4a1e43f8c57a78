"""Classify raw packet headers against an SLA policy.

The policy below puts UDP traffic to ports 5000-5005 at minimum level 2 and
TCP/ssh between two subnets at level 4; everything else defaults to 0.
"""

from farsec import build_header, load_sla, min_security, parse_header
from farsec.sla import ICMP, TCP, UDP

POLICY_CSV = (
    "Protocol,SourceAddress,DestinationAddress,DSCP,"
    "SourcePortMin,SourcePortMax,DestinationPortMin,DestinationPortMax,MinSec\n"
    "UDP,0.0.0.0/0,0.0.0.0/0,0,0,65535,5000,5005,2\n"
    "TCP,192.168.1.0/24,192.168.2.0/24,0,0,65535,22,22,4\n"
)

policy = load_sla(POLICY_CSV)
print(f"policy: {len(policy.rules)} rules, default level {policy.default_min_sec}")

###############################################################################
# Build a few headers the way a host stack would emit them and decode them
# back. The parser reads only the fields the policy can match on.

samples = {
    "udp video":  build_header(UDP, "10.1.0.1", "10.2.0.1", dst_port=5002, src_port=44000),
    "udp other":  build_header(UDP, "10.1.0.1", "10.2.0.1", dst_port=8080, src_port=44001),
    "ssh":        build_header(TCP, "192.168.1.10", "192.168.2.20", dst_port=22, src_port=51515),
    "ssh (off-subnet)": build_header(TCP, "172.16.0.1", "192.168.2.20", dst_port=22, src_port=51516),
    "ping":       build_header(ICMP, "192.168.1.1", "192.168.3.1"),
}

for label, header in samples.items():
    fields = parse_header(header)
    level = min_security(policy, fields)
    print(f"\n{label}:")
    print(f"  {fields.protocol_label} {fields.src_addr}:{fields.src_port}"
          f" -> {fields.dst_addr}:{fields.dst_port} dscp={fields.dscp}")
    print(f"  raw: {header}")
    print(f"  minimum security level: {level}")
