"""Packet header parsing and SLA policy evaluation.

Flow requirements come from a policy: an ordered list of match rules
(protocol, source/destination prefixes, DSCP, port ranges), each carrying the
minimum security level for matching traffic. The FIRST matching rule in file
order decides; traffic matching no rule gets the default requirement of 0.
DSCP matches by exact equality.

Headers arrive as hex strings of raw IPv4 packets, the same wire format the
request files carry. Only fields the policy can match on are decoded;
checksums and the total-length field are ignored. IPv6 is rejected.
"""

from __future__ import annotations

import ipaddress
from dataclasses import dataclass
from ipaddress import IPv4Address, IPv4Network
from typing import Callable, Iterable

ICMP = 1
TCP = 6
UDP = 17

PROTOCOL_NUMBERS = {"ICMP": ICMP, "TCP": TCP, "UDP": UDP}
PROTOCOL_NAMES = {number: name for name, number in PROTOCOL_NUMBERS.items()}

SLA_HEADER = (
    "Protocol,SourceAddress,DestinationAddress,DSCP,"
    "SourcePortMin,SourcePortMax,DestinationPortMin,DestinationPortMax,MinSec"
)

_HEX_DIGITS = frozenset("0123456789abcdefABCDEF")
_PORTED_PROTOCOLS = (TCP, UDP)


class HeaderError(ValueError):
    """Malformed packet header."""


class SlaError(ValueError):
    """Malformed SLA rule or policy file."""


def protocol_name(number: int) -> str:
    return PROTOCOL_NAMES.get(number, f"OTHER({number})")


@dataclass(frozen=True)
class HeaderFields:
    """Decoded match fields of one packet header.

    Ports are 0 whenever the protocol carries none (ICMP and anything else
    that is not TCP/UDP).
    """

    protocol: int
    src_addr: IPv4Address
    dst_addr: IPv4Address
    dscp: int
    src_port: int = 0
    dst_port: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.protocol <= 255:
            raise HeaderError(f"protocol number out of range: {self.protocol}")
        if not 0 <= self.dscp <= 63:
            raise HeaderError(f"DSCP out of range: {self.dscp}")
        for port in (self.src_port, self.dst_port):
            if not 0 <= port <= 65535:
                raise HeaderError(f"port out of range: {port}")
        if self.protocol not in _PORTED_PROTOCOLS and (self.src_port or self.dst_port):
            raise HeaderError(
                f"{protocol_name(self.protocol)} carries no ports; they must be 0"
            )

    @property
    def protocol_label(self) -> str:
        return protocol_name(self.protocol)


def parse_header(hex_header: str) -> HeaderFields:
    """Decode the match fields from a raw IPv4 packet given as hex.

    The string must be even-length hex covering at least the 20-byte base
    header; for TCP and UDP the four port bytes past the IP header (options
    included) must be present as well. Rejects version != 4.
    """
    if len(hex_header) % 2:
        raise HeaderError("odd-length hex header")
    if not hex_header or not set(hex_header) <= _HEX_DIGITS:
        raise HeaderError("header is not plain hex")
    raw = bytes.fromhex(hex_header)
    if len(raw) < 20:
        raise HeaderError(f"truncated header: {len(raw)} bytes, need at least 20")
    version = raw[0] >> 4
    if version != 4:
        raise HeaderError(f"not an IPv4 header (version {version})")
    ihl = raw[0] & 0x0F
    if ihl < 5:
        raise HeaderError(f"invalid IHL {ihl}")
    header_len = ihl * 4
    if len(raw) < header_len:
        raise HeaderError(f"truncated header: {len(raw)} bytes, IHL says {header_len}")
    dscp = raw[1] >> 2
    protocol = raw[9]
    src_addr = IPv4Address(raw[12:16])
    dst_addr = IPv4Address(raw[16:20])
    src_port = dst_port = 0
    if protocol in _PORTED_PROTOCOLS:
        if len(raw) < header_len + 4:
            raise HeaderError("truncated header: port bytes missing")
        src_port = int.from_bytes(raw[header_len : header_len + 2], "big")
        dst_port = int.from_bytes(raw[header_len + 2 : header_len + 4], "big")
    return HeaderFields(protocol, src_addr, dst_addr, dscp, src_port, dst_port)


def build_header(
    protocol: int,
    src_addr: str | IPv4Address,
    dst_addr: str | IPv4Address,
    *,
    dscp: int = 0,
    src_port: int = 0,
    dst_port: int = 0,
    ttl: int = 64,
) -> str:
    """Assemble a canonical 28-byte packet header as lowercase hex.

    The layout is a 20-byte IPv4 header (no options, zero checksum) followed
    by an 8-byte transport stub: port words plus zero padding for TCP/UDP,
    all zeros otherwise. parse_header(build_header(...)) returns the same
    fields.
    """
    fields = HeaderFields(
        protocol,
        IPv4Address(src_addr),
        IPv4Address(dst_addr),
        dscp,
        src_port,
        dst_port,
    )
    packet = bytearray(28)
    packet[0] = 0x45
    packet[1] = fields.dscp << 2
    packet[2:4] = (28).to_bytes(2, "big")
    packet[8] = ttl
    packet[9] = fields.protocol
    packet[12:16] = fields.src_addr.packed
    packet[16:20] = fields.dst_addr.packed
    if fields.protocol in _PORTED_PROTOCOLS:
        packet[20:22] = fields.src_port.to_bytes(2, "big")
        packet[22:24] = fields.dst_port.to_bytes(2, "big")
    return packet.hex()


@dataclass(frozen=True)
class SlaRule:
    """One match rule with its minimum security level."""

    protocol: int
    src_cidr: IPv4Network
    dst_cidr: IPv4Network
    dscp: int
    src_port_min: int
    src_port_max: int
    dst_port_min: int
    dst_port_max: int
    min_sec: int

    def __post_init__(self) -> None:
        if self.protocol not in PROTOCOL_NAMES:
            raise SlaError(f"unsupported rule protocol number {self.protocol}")
        if not 0 <= self.dscp <= 63:
            raise SlaError(f"rule DSCP out of range: {self.dscp}")
        for port in (
            self.src_port_min,
            self.src_port_max,
            self.dst_port_min,
            self.dst_port_max,
        ):
            if not 0 <= port <= 65535:
                raise SlaError(f"rule port out of range: {port}")
        if self.src_port_min > self.src_port_max:
            raise SlaError(
                f"source port range inverted: {self.src_port_min} > {self.src_port_max}"
            )
        if self.dst_port_min > self.dst_port_max:
            raise SlaError(
                f"destination port range inverted: {self.dst_port_min} > {self.dst_port_max}"
            )
        if self.min_sec < 0:
            raise SlaError(f"MinSec must be nonnegative, got {self.min_sec}")

    def matches(self, fields: HeaderFields) -> bool:
        # cheap scalar comparisons first, prefix containment last
        return (
            fields.protocol == self.protocol
            and fields.dscp == self.dscp
            and self.src_port_min <= fields.src_port <= self.src_port_max
            and self.dst_port_min <= fields.dst_port <= self.dst_port_max
            and fields.src_addr in self.src_cidr
            and fields.dst_addr in self.dst_cidr
        )


@dataclass(frozen=True)
class SlaPolicy:
    """Ordered rule list plus the default level for unmatched traffic."""

    rules: tuple[SlaRule, ...] = ()
    default_min_sec: int = 0


EMPTY_POLICY = SlaPolicy()


def min_security(policy: SlaPolicy, fields: HeaderFields) -> int:
    """Requirement of the first rule matching the packet, else the default."""
    for rule in policy.rules:
        if rule.matches(fields):
            return rule.min_sec
    return policy.default_min_sec


def requirement_resolver(policy: SlaPolicy) -> Callable[[str], int]:
    """Compose header parsing with policy lookup: raw hex -> minimum level."""

    def resolve(hex_header: str) -> int:
        return min_security(policy, parse_header(hex_header))

    return resolve


def _parse_cidr(text: str, lineno: int) -> IPv4Network:
    try:
        network = ipaddress.ip_network(text, strict=False)
    except ValueError as exc:
        raise SlaError(f"SLA line {lineno}: bad CIDR {text!r} ({exc})") from None
    if not isinstance(network, IPv4Network):
        raise SlaError(f"SLA line {lineno}: only IPv4 prefixes are supported")
    return network


def _parse_int(text: str, lineno: int, what: str) -> int:
    if not text.isascii() or not text.isdigit() or (len(text) > 1 and text[0] == "0"):
        raise SlaError(f"SLA line {lineno}: {what} must be a canonical integer, got {text!r}")
    return int(text)


def load_sla(text: str) -> SlaPolicy:
    """Parse an SLA CSV into a policy, preserving rule order.

    Protocol names are case-insensitive. Rows with inverted port ranges are
    rejected outright rather than silently reordered.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines or lines[0] != SLA_HEADER:
        raise SlaError("SLA file must start with the exact field header line")
    rules: list[SlaRule] = []
    for lineno, row in enumerate(lines[1:], start=2):
        parts = row.split(",")
        if len(parts) != 9:
            raise SlaError(f"SLA line {lineno}: expected 9 fields, got {len(parts)}")
        proto_text = parts[0].upper()
        if proto_text not in PROTOCOL_NUMBERS:
            raise SlaError(f"SLA line {lineno}: unknown protocol {parts[0]!r}")
        try:
            rules.append(
                SlaRule(
                    protocol=PROTOCOL_NUMBERS[proto_text],
                    src_cidr=_parse_cidr(parts[1], lineno),
                    dst_cidr=_parse_cidr(parts[2], lineno),
                    dscp=_parse_int(parts[3], lineno, "DSCP"),
                    src_port_min=_parse_int(parts[4], lineno, "SourcePortMin"),
                    src_port_max=_parse_int(parts[5], lineno, "SourcePortMax"),
                    dst_port_min=_parse_int(parts[6], lineno, "DestinationPortMin"),
                    dst_port_max=_parse_int(parts[7], lineno, "DestinationPortMax"),
                    min_sec=_parse_int(parts[8], lineno, "MinSec"),
                )
            )
        except SlaError as exc:
            if str(exc).startswith("SLA line"):
                raise
            raise SlaError(f"SLA line {lineno}: {exc}") from None
    return SlaPolicy(tuple(rules))


def dump_sla(policy: SlaPolicy) -> str:
    """Serialize a policy to the SLA CSV format (trailing newline).

    CIDRs are written in normalized prefix form, so files whose prefixes are
    already normalized round-trip byte for byte.
    """
    rows = [SLA_HEADER]
    rows.extend(
        f"{PROTOCOL_NAMES[r.protocol]},{r.src_cidr},{r.dst_cidr},{r.dscp},"
        f"{r.src_port_min},{r.src_port_max},{r.dst_port_min},{r.dst_port_max},{r.min_sec}"
        for r in policy.rules
    )
    return "\n".join(rows) + "\n"


def port_encoded_policy(requirements: Iterable[int], port_base: int = 20000) -> SlaPolicy:
    """Policy with one UDP rule per requirement, keyed on destination port.

    Used by the instance generator: a packet with destination port
    ``port_base + r`` classifies to requirement ``r``, so emitted SLA files
    reproduce generated requirements through normal matching.
    """
    any4 = IPv4Network("0.0.0.0/0")
    rules = tuple(
        SlaRule(UDP, any4, any4, 0, 0, 65535, port_base + level, port_base + level, level)
        for level in sorted(set(requirements))
    )
    return SlaPolicy(rules)
