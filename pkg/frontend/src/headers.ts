// Build the canonical 28-byte packet header the engine expects from the
// inject form: 20-byte IPv4 header (no options, zero checksum, TTL 64)
// followed by an 8-byte transport stub carrying the ports for TCP/UDP.
// Must stay byte-compatible with the server's own builder.

export const PROTOCOL_NUMBERS: Record<string, number> = {
  ICMP: 1,
  TCP: 6,
  UDP: 17,
};

export interface FlowForm {
  protocol: "ICMP" | "TCP" | "UDP";
  srcIp: string;
  dstIp: string;
  dscp: number;
  srcPort: number;
  dstPort: number;
}

export function validateForm(form: FlowForm): string[] {
  const problems: string[] = [];
  if (!(form.protocol in PROTOCOL_NUMBERS)) problems.push(`unknown protocol ${form.protocol}`);
  for (const [label, ip] of [["source", form.srcIp], ["destination", form.dstIp]] as const) {
    if (parseIp(ip) === null) problems.push(`${label} address ${ip} is not IPv4`);
  }
  if (!Number.isInteger(form.dscp) || form.dscp < 0 || form.dscp > 63) {
    problems.push(`DSCP ${form.dscp} out of range 0-63`);
  }
  for (const [label, port] of [["source", form.srcPort], ["destination", form.dstPort]] as const) {
    if (!Number.isInteger(port) || port < 0 || port > 65535) {
      problems.push(`${label} port ${port} out of range`);
    }
  }
  if (form.protocol === "ICMP" && (form.srcPort || form.dstPort)) {
    problems.push("ICMP carries no ports; leave them 0");
  }
  return problems;
}

export function parseIp(text: string): number[] | null {
  const parts = text.split(".");
  if (parts.length !== 4) return null;
  const octets = parts.map((p) => (/^\d{1,3}$/.test(p) ? Number(p) : NaN));
  if (octets.some((o) => Number.isNaN(o) || o > 255)) return null;
  return octets;
}

export function buildHeader(form: FlowForm): string {
  const problems = validateForm(form);
  if (problems.length) throw new Error(problems.join("; "));
  const packet = new Uint8Array(28);
  packet[0] = 0x45;
  packet[1] = form.dscp << 2;
  packet[2] = 0;
  packet[3] = 28;
  packet[8] = 64;
  packet[9] = PROTOCOL_NUMBERS[form.protocol];
  packet.set(parseIp(form.srcIp)!, 12);
  packet.set(parseIp(form.dstIp)!, 16);
  if (form.protocol !== "ICMP") {
    packet[20] = form.srcPort >> 8;
    packet[21] = form.srcPort & 0xff;
    packet[22] = form.dstPort >> 8;
    packet[23] = form.dstPort & 0xff;
  }
  return Array.from(packet, (b) => b.toString(16).padStart(2, "0")).join("");
}
