// Server-sent event subscription over fetch streaming. Works in browsers
// and in Node 20 (global fetch), unlike the DOM-only EventSource.

import type { Delta } from "./types.js";

export interface Subscription {
  close(): void;
  done: Promise<void>;
}

export interface SubscribeOptions {
  since?: number;
  until?: number;
  onDelta: (delta: Delta) => void;
  onClose?: (error?: unknown) => void;
}

export function subscribeDeltas(baseUrl: string, options: SubscribeOptions): Subscription {
  const controller = new AbortController();
  const params = new URLSearchParams();
  if (options.since !== undefined) params.set("since", String(options.since));
  if (options.until !== undefined) params.set("until", String(options.until));
  const query = params.size ? `?${params}` : "";

  const done = (async () => {
    try {
      const response = await fetch(`${baseUrl}/api/events${query}`, {
        signal: controller.signal,
        headers: { Accept: "text/event-stream" },
      });
      if (!response.ok || !response.body) {
        throw new Error(`event stream failed: ${response.status}`);
      }
      const reader = response.body.getReader();
      const decoder = new TextDecoder();
      let buffer = "";
      for (;;) {
        const { done: finished, value } = await reader.read();
        if (finished) break;
        buffer += decoder.decode(value, { stream: true });
        let boundary;
        while ((boundary = buffer.indexOf("\n\n")) >= 0) {
          const frame = buffer.slice(0, boundary);
          buffer = buffer.slice(boundary + 2);
          for (const line of frame.split("\n")) {
            if (line.startsWith("data: ")) {
              options.onDelta(JSON.parse(line.slice(6)) as Delta);
            }
          }
        }
      }
      options.onClose?.();
    } catch (error) {
      if ((error as Error).name === "AbortError") {
        options.onClose?.();
      } else {
        options.onClose?.(error);
      }
    }
  })();

  return {
    close: () => controller.abort(),
    done,
  };
}
