// Thin fetch wrapper for the engine's HTTP surface. Errors from the server
// (404 unknown link/host, 400 bad input) surface as ApiError so the UI can
// show them inline instead of crashing the render loop.

import type { FlowDecision, Snapshot } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function expectJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  async getState(): Promise<Snapshot> {
    return expectJson<Snapshot>(await fetch(`${this.baseUrl}/api/state`));
  }

  async setLinkLevel(src: string, dst: string, level: number): Promise<number> {
    const response = await fetch(`${this.baseUrl}/api/link-security`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ src, dst, level }),
    });
    const body = await expectJson<{ version: number }>(response);
    return body.version;
  }

  async injectFlow(
    sourceHost: string,
    destHost: string,
    headerHex: string,
  ): Promise<FlowDecision> {
    const response = await fetch(`${this.baseUrl}/api/flows`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        "source-host": sourceHost,
        "dest-host": destHost,
        "header-hex": headerHex,
      }),
    });
    return expectJson<FlowDecision>(response);
  }

  async putSla(csv: string): Promise<number> {
    const response = await fetch(`${this.baseUrl}/api/sla`, {
      method: "PUT",
      headers: { "Content-Type": "text/csv" },
      body: csv,
    });
    const body = await expectJson<{ version: number }>(response);
    return body.version;
  }
}
