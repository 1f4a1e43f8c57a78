// Client-side view model. Holds only server-confirmed state: every visible
// value comes from a snapshot or from deltas applied strictly in version
// order. Operator edits are tracked as pending markers until the matching
// delta confirms them; the console never computes paths itself.

import type {
  ConnectionStatus,
  Delta,
  FlowView,
  LinkView,
  Snapshot,
} from "./types.js";

export interface PendingEdit {
  src: string;
  dst: string;
  level: number;
}

export class VersionGapError extends Error {
  constructor(expected: number, got: number) {
    super(`delta version gap: expected ${expected}, got ${got}`);
  }
}

/** Pure replay step mirroring the server's delta semantics: updates replace
 *  in place, new entries append, removals keep the remaining order. */
export function applyDelta(snapshot: Snapshot, delta: Delta): Snapshot {
  const changes = delta.changes;
  const nodes = snapshot.topology.nodes
    .filter((n) => !changes.nodes_removed.includes(n))
    .concat(changes.nodes_added);

  const removedLinks = new Set(changes.links_removed.map(([s, d]) => `${s}|${d}`));
  const upserts = new Map(changes.links_upserted.map((l) => [`${l.src}|${l.dst}`, l]));
  const links: LinkView[] = [];
  for (const link of snapshot.topology.links) {
    const key = `${link.src}|${link.dst}`;
    if (removedLinks.has(key)) continue;
    const upsert = upserts.get(key);
    if (upsert) {
      links.push(upsert);
      upserts.delete(key);
    } else {
      links.push(link);
    }
  }
  links.push(...upserts.values());

  const removedFlows = new Set(changes.flows_removed);
  const flowUpserts = new Map(changes.flows_upserted.map((f) => [f.id, f]));
  const flows: FlowView[] = [];
  for (const flow of snapshot.flows) {
    if (removedFlows.has(flow.id)) continue;
    const upsert = flowUpserts.get(flow.id);
    if (upsert) {
      flows.push(upsert);
      flowUpserts.delete(flow.id);
    } else {
      flows.push(flow);
    }
  }
  flows.push(...flowUpserts.values());

  return {
    version: delta.version,
    topology: { nodes, links },
    hosts: changes.hosts ?? snapshot.hosts,
    flows,
    sla: changes.sla ?? snapshot.sla,
  };
}

export class ConsoleStore {
  private snapshot: Snapshot | null = null;
  private pending: PendingEdit[] = [];
  status: ConnectionStatus = "connecting";
  private listeners: Array<() => void> = [];

  get version(): number {
    return this.snapshot?.version ?? -1;
  }

  get state(): Snapshot | null {
    return this.snapshot;
  }

  get pendingEdits(): readonly PendingEdit[] {
    return this.pending;
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  setStatus(status: ConnectionStatus): void {
    this.status = status;
    this.emit();
  }

  /** Replace everything with a server snapshot (initial load or resync). */
  acceptSnapshot(snapshot: Snapshot): void {
    this.snapshot = snapshot;
    this.reconcilePending();
    this.status = "live";
    this.emit();
  }

  /** Apply one pushed delta. Deltas must arrive in order without gaps; a
   *  gap marks the store desynced and the caller must refetch a snapshot. */
  acceptDelta(delta: Delta): void {
    if (!this.snapshot) {
      throw new VersionGapError(0, delta.version);
    }
    if (delta.version <= this.snapshot.version) {
      return; // already incorporated (snapshot raced ahead of the stream)
    }
    if (delta.version !== this.snapshot.version + 1) {
      this.status = "desynced";
      this.emit();
      throw new VersionGapError(this.snapshot.version + 1, delta.version);
    }
    this.snapshot = applyDelta(this.snapshot, delta);
    this.reconcilePending();
    this.emit();
  }

  /** Mark an operator edit as awaiting confirmation. */
  markPending(edit: PendingEdit): void {
    this.pending.push(edit);
    this.emit();
  }

  isPending(src: string, dst: string): boolean {
    return this.pending.some((e) => e.src === src && e.dst === dst);
  }

  private reconcilePending(): void {
    if (!this.snapshot) return;
    const levels = new Map(
      this.snapshot.topology.links.map((l) => [`${l.src}|${l.dst}`, l.level]),
    );
    this.pending = this.pending.filter(
      (e) => levels.get(`${e.src}|${e.dst}`) !== e.level,
    );
  }

  /** Flow rows for the table; rejected flows carry the displayed reason. */
  flowRows(): Array<FlowView & { reason: string | null }> {
    if (!this.snapshot) return [];
    return this.snapshot.flows.map((f) => ({
      ...f,
      reason: f.admitted ? null : "no feasible path",
    }));
  }

  /** Edge list of one admitted flow, exactly as the server mapped it. */
  pathEdges(flowId: string): [string, string][] {
    const flow = this.snapshot?.flows.find((f) => f.id === flowId);
    if (!flow || !flow.path) return [];
    const edges: [string, string][] = [];
    for (let i = 0; i + 1 < flow.path.length; i++) {
      edges.push([flow.path[i], flow.path[i + 1]]);
    }
    return edges;
  }
}
