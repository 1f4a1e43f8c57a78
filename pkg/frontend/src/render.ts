// SVG rendering of the topology plus the flow table and status banner.
// Pure view code: everything drawn comes from the store's server-confirmed
// snapshot; path overlays use the server's mapping edge for edge.

import { computeLayout, levelColor } from "./layout.js";
import type { ConsoleStore } from "./store.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const PALETTE = ["#e6550d", "#3182bd", "#756bb1", "#31a354", "#d6616b", "#8c6d31"];

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function renderTopology(store: ConsoleStore, svg: SVGSVGElement): void {
  svg.replaceChildren();
  const state = store.state;
  if (!state) return;
  const layout = computeLayout(state.topology);
  const maxLevel = Math.max(1, ...state.topology.links.map((l) => l.level));

  for (const link of state.topology.links) {
    const a = layout.get(link.src);
    const b = layout.get(link.dst);
    if (!a || !b) continue;
    // offset each direction slightly so both arrows stay visible
    const nx = (b.y - a.y) / Math.max(1, Math.hypot(b.x - a.x, b.y - a.y));
    const ny = (a.x - b.x) / Math.max(1, Math.hypot(b.x - a.x, b.y - a.y));
    const line = el("line", {
      x1: String(a.x + nx * 3),
      y1: String(a.y + ny * 3),
      x2: String(b.x + nx * 3),
      y2: String(b.y + ny * 3),
      stroke: levelColor(link.level, maxLevel),
      "stroke-width": store.isPending(link.src, link.dst) ? "1" : "2",
      "stroke-dasharray": store.isPending(link.src, link.dst) ? "4 3" : "",
      "data-link": `${link.src}->${link.dst}`,
    });
    svg.appendChild(line);
    const label = el("text", {
      x: String((a.x + b.x) / 2 + nx * 10),
      y: String((a.y + b.y) / 2 + ny * 10),
      "font-size": "10",
      fill: "#444",
    });
    label.textContent = String(link.level);
    svg.appendChild(label);
  }

  const admitted = state.flows.filter((f) => f.admitted);
  admitted.forEach((flow, index) => {
    for (const [src, dst] of store.pathEdges(flow.id)) {
      const a = layout.get(src);
      const b = layout.get(dst);
      if (!a || !b) continue;
      svg.appendChild(
        el("line", {
          x1: String(a.x),
          y1: String(a.y),
          x2: String(b.x),
          y2: String(b.y),
          stroke: PALETTE[index % PALETTE.length],
          "stroke-width": "5",
          "stroke-opacity": "0.35",
          "data-flow-path": flow.id,
        }),
      );
    }
  });

  for (const [name, point] of computeLayout(state.topology)) {
    svg.appendChild(
      el("circle", {
        cx: String(point.x),
        cy: String(point.y),
        r: "12",
        fill: "#fff",
        stroke: "#222",
        "stroke-width": "1.5",
        "data-node": name,
      }),
    );
    const text = el("text", {
      x: String(point.x),
      y: String(point.y + 3),
      "text-anchor": "middle",
      "font-size": "9",
    });
    text.textContent = name;
    svg.appendChild(text);
  }
}

export function renderFlowTable(store: ConsoleStore, tbody: HTMLTableSectionElement): void {
  tbody.replaceChildren();
  for (const row of store.flowRows()) {
    const tr = document.createElement("tr");
    const cells = [
      row.id,
      `${row.origin} -> ${row.destination}`,
      String(row.requirement),
      row.admitted ? "admitted" : "rejected",
      row.path ? row.path.join(" -> ") : (row.reason ?? ""),
    ];
    for (const value of cells) {
      const td = document.createElement("td");
      td.textContent = value;
      tr.appendChild(td);
    }
    tr.dataset.flowId = row.id;
    tr.className = row.admitted ? "admitted" : "rejected";
    tbody.appendChild(tr);
  }
}

export function renderStatus(store: ConsoleStore, banner: HTMLElement): void {
  banner.dataset.status = store.status;
  banner.textContent =
    store.status === "live"
      ? `live — version ${store.version}`
      : store.status === "desynced"
        ? "stream gap detected — resyncing"
        : store.status;
}
