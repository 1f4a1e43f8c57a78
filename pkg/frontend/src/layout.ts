// Deterministic force-directed layout: the RNG is seeded from the node set,
// so the same topology always lands in the same positions and demo
// recordings are reproducible. A fixed number of spring/repulsion rounds is
// plenty at console scale (tens of nodes).

import type { TopologyView } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export type Layout = Map<string, Point>;

function hashNodes(nodes: string[]): number {
  let h = 2166136261;
  for (const name of nodes) {
    for (let i = 0; i < name.length; i++) {
      h ^= name.charCodeAt(i);
      h = Math.imul(h, 16777619);
    }
    h ^= 0x7c;
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function computeLayout(
  topology: TopologyView,
  width = 640,
  height = 420,
  rounds = 250,
): Layout {
  const nodes = [...topology.nodes].sort();
  const rand = mulberry32(hashNodes(nodes));
  const positions: Layout = new Map(
    nodes.map((n) => [n, { x: rand() * width, y: rand() * height }]),
  );
  if (nodes.length < 2) return positions;

  const undirected = new Set<string>();
  for (const { src, dst } of topology.links) {
    undirected.add(src < dst ? `${src}|${dst}` : `${dst}|${src}`);
  }
  const springs = [...undirected].sort().map((key) => key.split("|") as [string, string]);
  const ideal = Math.min(width, height) / Math.max(2, Math.sqrt(nodes.length) + 1);

  for (let round = 0; round < rounds; round++) {
    const cooling = 1 - round / rounds;
    const shift = new Map(nodes.map((n) => [n, { x: 0, y: 0 }]));
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const a = positions.get(nodes[i])!;
        const b = positions.get(nodes[j])!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const dist = Math.max(Math.hypot(dx, dy), 0.01);
        const push = (ideal * ideal) / dist / dist;
        shift.get(nodes[i])!.x += dx * push;
        shift.get(nodes[i])!.y += dy * push;
        shift.get(nodes[j])!.x -= dx * push;
        shift.get(nodes[j])!.y -= dy * push;
      }
    }
    for (const [src, dst] of springs) {
      const a = positions.get(src)!;
      const b = positions.get(dst)!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(Math.hypot(dx, dy), 0.01);
      const pull = (dist - ideal) / dist / 8;
      shift.get(src)!.x += dx * pull;
      shift.get(src)!.y += dy * pull;
      shift.get(dst)!.x -= dx * pull;
      shift.get(dst)!.y -= dy * pull;
    }
    for (const name of nodes) {
      const p = positions.get(name)!;
      const s = shift.get(name)!;
      p.x = Math.min(width - 20, Math.max(20, p.x + s.x * cooling));
      p.y = Math.min(height - 20, Math.max(20, p.y + s.y * cooling));
    }
  }
  return positions;
}

/** Color scale for link security levels: red (0) through green (high). */
export function levelColor(level: number, maxLevel: number): string {
  const span = Math.max(1, maxLevel);
  const t = Math.min(1, level / span);
  const hue = Math.round(t * 120);
  return `hsl(${hue}, 70%, 42%)`;
}
