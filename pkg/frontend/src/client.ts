/** HTTP/SSE client for the control service.
 *
 * The event stream is parsed from a fetch body rather than EventSource,
 * so the same code runs in the browser and under the node test runner.
 */

import type { CommandResult, LogRecord, SystemSnapshot } from "./types.js";

/** Incremental server-sent-events parser: feed chunks, get data payloads. */
export class SseParser {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const payloads: string[] = [];
    let boundary: number;
    while ((boundary = this.buffer.indexOf("\n\n")) >= 0) {
      const block = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary + 2);
      const data = block
        .split("\n")
        .filter((line) => line.startsWith("data: "))
        .map((line) => line.slice(6))
        .join("\n");
      if (data) payloads.push(data);
    }
    return payloads;
  }
}

export interface EventStreamHandlers {
  onRecord: (record: LogRecord) => void;
  onStatus?: (status: "connecting" | "live" | "lost") => void;
}

/** What the console needs from the service; ServiceClient is the real one. */
export interface ConsoleBackend {
  getState(): Promise<SystemSnapshot>;
  submitCommand(text: string): Promise<CommandResult>;
  streamEvents(handlers: EventStreamHandlers, signal: AbortSignal): Promise<void>;
}

export class ServiceClient implements ConsoleBackend {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  async getState(): Promise<SystemSnapshot> {
    const response = await this.fetchImpl(`${this.base}/state`);
    if (!response.ok) throw new Error(`GET /state -> ${response.status}`);
    return (await response.json()) as SystemSnapshot;
  }

  async submitCommand(text: string): Promise<CommandResult> {
    const response = await this.fetchImpl(`${this.base}/command`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
    return (await response.json()) as CommandResult;
  }

  /**
   * Consume /events until aborted; reconnects with a short backoff and
   * reports status transitions so the UI can show degraded state.
   */
  streamEvents(handlers: EventStreamHandlers, signal: AbortSignal): Promise<void> {
    const run = async () => {
      while (!signal.aborted) {
        handlers.onStatus?.("connecting");
        try {
          const response = await this.fetchImpl(`${this.base}/events`, { signal });
          if (!response.ok || !response.body) throw new Error(`status ${response.status}`);
          handlers.onStatus?.("live");
          const reader = response.body.getReader();
          const decoder = new TextDecoder();
          const parser = new SseParser();
          for (;;) {
            const { done, value } = await reader.read();
            if (done) break;
            for (const payload of parser.push(decoder.decode(value, { stream: true }))) {
              try {
                handlers.onRecord(JSON.parse(payload) as LogRecord);
              } catch {
                // skip malformed frame
              }
            }
          }
        } catch {
          if (signal.aborted) break;
        }
        if (signal.aborted) break;
        handlers.onStatus?.("lost");
        await new Promise((resolve) => setTimeout(resolve, 1000));
      }
    };
    return run();
  }
}
