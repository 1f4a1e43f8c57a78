import { describe, expect, it } from "vitest";

import { computeLayout, levelColor } from "../src/layout.js";
import type { TopologyView } from "../src/types.js";

const TOPOLOGY: TopologyView = {
  nodes: ["s1", "s2", "s3", "s4"],
  links: [
    { src: "s1", dst: "s2", level: 4 },
    { src: "s2", dst: "s3", level: 4 },
    { src: "s1", dst: "s4", level: 4 },
    { src: "s4", dst: "s3", level: 4 },
  ],
};

describe("computeLayout", () => {
  it("is deterministic for a given topology", () => {
    const first = computeLayout(TOPOLOGY);
    const second = computeLayout(TOPOLOGY);
    expect([...first.entries()]).toEqual([...second.entries()]);
  });

  it("ignores node listing order", () => {
    const shuffled: TopologyView = {
      nodes: ["s4", "s2", "s1", "s3"],
      links: TOPOLOGY.links,
    };
    expect([...computeLayout(shuffled).entries()].sort()).toEqual(
      [...computeLayout(TOPOLOGY).entries()].sort(),
    );
  });

  it("keeps every node inside the canvas and apart from the rest", () => {
    const layout = computeLayout(TOPOLOGY, 640, 420);
    const points = [...layout.values()];
    for (const p of points) {
      expect(p.x).toBeGreaterThanOrEqual(20);
      expect(p.x).toBeLessThanOrEqual(620);
      expect(p.y).toBeGreaterThanOrEqual(20);
      expect(p.y).toBeLessThanOrEqual(400);
    }
    for (let i = 0; i < points.length; i++) {
      for (let j = i + 1; j < points.length; j++) {
        const dist = Math.hypot(points[i].x - points[j].x, points[i].y - points[j].y);
        expect(dist).toBeGreaterThan(15);
      }
    }
  });
});

describe("levelColor", () => {
  it("spans red to green with level", () => {
    expect(levelColor(0, 4)).toBe("hsl(0, 70%, 42%)");
    expect(levelColor(4, 4)).toBe("hsl(120, 70%, 42%)");
  });
});
