import { describe, expect, it } from "vitest";

import { buildHeader, parseIp, validateForm, type FlowForm } from "../src/headers.js";

// Frozen vectors produced by the server-side builder; the console must emit
// byte-identical headers or injected flows would classify differently.
const SERVER_VECTORS: Array<[FlowForm, string]> = [
  [
    { protocol: "UDP", srcIp: "192.168.1.1", dstIp: "192.168.3.1", dscp: 0, srcPort: 40001, dstPort: 5000 },
    "4500001c0000000040110000c0a80101c0a803019c41138800000000",
  ],
  [
    { protocol: "TCP", srcIp: "10.0.0.1", dstIp: "10.0.0.2", dscp: 46, srcPort: 51515, dstPort: 22 },
    "45b8001c00000000400600000a0000010a000002c93b001600000000",
  ],
  [
    { protocol: "ICMP", srcIp: "192.168.1.1", dstIp: "192.168.3.1", dscp: 0, srcPort: 0, dstPort: 0 },
    "4500001c0000000040010000c0a80101c0a803010000000000000000",
  ],
];

describe("buildHeader", () => {
  it("matches the server byte for byte", () => {
    for (const [form, expected] of SERVER_VECTORS) {
      expect(buildHeader(form)).toBe(expected);
    }
  });

  it("rejects invalid forms before sending", () => {
    expect(validateForm({ protocol: "UDP", srcIp: "256.0.0.1", dstIp: "10.0.0.1", dscp: 0, srcPort: 1, dstPort: 1 })).not.toHaveLength(0);
    expect(validateForm({ protocol: "UDP", srcIp: "10.0.0.1", dstIp: "10.0.0.2", dscp: 64, srcPort: 1, dstPort: 1 })).not.toHaveLength(0);
    expect(validateForm({ protocol: "UDP", srcIp: "10.0.0.1", dstIp: "10.0.0.2", dscp: 0, srcPort: 70000, dstPort: 1 })).not.toHaveLength(0);
    expect(validateForm({ protocol: "ICMP", srcIp: "10.0.0.1", dstIp: "10.0.0.2", dscp: 0, srcPort: 5, dstPort: 0 })).not.toHaveLength(0);
    expect(() => buildHeader({ protocol: "UDP", srcIp: "bad", dstIp: "10.0.0.2", dscp: 0, srcPort: 1, dstPort: 1 })).toThrow();
  });
});

describe("parseIp", () => {
  it("handles dotted quads strictly", () => {
    expect(parseIp("192.168.1.1")).toEqual([192, 168, 1, 1]);
    expect(parseIp("1.2.3")).toBeNull();
    expect(parseIp("1.2.3.999")).toBeNull();
    expect(parseIp("a.b.c.d")).toBeNull();
  });
});
