// Wire shapes served by the engine. The snapshot is canonical JSON
// (sorted keys server-side); deltas are structural diffs between
// consecutive snapshots, tagged with the version they produce.

export interface LinkView {
  src: string;
  dst: string;
  level: number;
}

export interface TopologyView {
  nodes: string[];
  links: LinkView[];
}

export interface HostView {
  name: string;
  switch: string;
  ip: string;
}

export interface FlowView {
  id: string;
  origin: string;
  destination: string;
  requirement: number;
  admitted: boolean;
  path: string[] | null;
  header: string;
}

export interface SlaRuleView {
  protocol: string;
  src_cidr: string;
  dst_cidr: string;
  dscp: number;
  src_port_min: number;
  src_port_max: number;
  dst_port_min: number;
  dst_port_max: number;
  min_sec: number;
}

export interface SlaView {
  default_min_sec: number;
  rules: SlaRuleView[];
}

export interface Snapshot {
  version: number;
  topology: TopologyView;
  hosts: HostView[];
  flows: FlowView[];
  sla: SlaView;
}

export interface DeltaChanges {
  nodes_added: string[];
  nodes_removed: string[];
  links_upserted: LinkView[];
  links_removed: [string, string][];
  flows_upserted: FlowView[];
  flows_removed: string[];
  sla: SlaView | null;
  hosts: HostView[] | null;
}

export interface RuleDiffEntry {
  action: "install" | "withdraw";
  device: string;
  flow_id: string;
  out_src: string;
  out_dst: string;
}

export interface Delta {
  version: number;
  changes: DeltaChanges;
  rule_diff: RuleDiffEntry[];
}

export interface FlowDecision {
  flow_id: string;
  admitted: boolean;
  path: string[] | null;
  requirement: number;
  version: number;
}

export type ConnectionStatus = "connecting" | "live" | "disconnected" | "desynced";
