/** Console controller: wires the service client to the view.
 *
 * Event records append to the feed as they arrive; any record also
 * schedules a debounced /state refresh, so the marking table, aspect
 * badge and world canvas track the server within the debounce window.
 * Connection loss is shown prominently; reconnection re-syncs from a
 * fresh /state.
 */

import type { ConsoleBackend } from "./client.js";
import type { ConnectionStatus, LogRecord } from "./types.js";
import { appendEvents, ConsoleElements, HistoryEntry, renderConnection, renderSnapshot } from "./view.js";

export interface ControllerOptions {
  /** Delay between an event record arriving and the /state refresh. */
  refreshDebounceMs?: number;
}

export class ConsoleController {
  private readonly abort = new AbortController();
  private refreshTimer: ReturnType<typeof setTimeout> | null = null;
  private readonly history: HistoryEntry[] = [];
  private readonly debounceMs: number;
  /** Index of the last event record reflected in a rendered snapshot. */
  lastRenderedIndex = -1;
  private lastSeenIndex = -1;
  renderCount = 0;

  constructor(
    private readonly els: ConsoleElements,
    private readonly client: ConsoleBackend,
    options: ControllerOptions = {},
    private readonly historyList?: HTMLElement,
  ) {
    this.debounceMs = options.refreshDebounceMs ?? 100;
  }

  async start(): Promise<void> {
    renderConnection(this.els.connection, "connecting");
    await this.refresh();
    void this.client.streamEvents(
      {
        onRecord: (record) => this.onRecord(record),
        onStatus: (status) => this.onStatus(status),
      },
      this.abort.signal,
    );
  }

  stop(): void {
    this.abort.abort();
    if (this.refreshTimer !== null) clearTimeout(this.refreshTimer);
  }

  onStatus(status: ConnectionStatus): void {
    renderConnection(this.els.connection, status);
    if (status === "live") {
      void this.refresh(); // reconnect resumes from a fresh snapshot
    }
  }

  onRecord(record: LogRecord): void {
    appendEvents(this.els.feed, [record]);
    this.lastSeenIndex = Math.max(this.lastSeenIndex, record.index);
    if (this.refreshTimer === null) {
      this.refreshTimer = setTimeout(() => {
        this.refreshTimer = null;
        void this.refresh();
      }, this.debounceMs);
    }
  }

  async refresh(): Promise<void> {
    const seen = this.lastSeenIndex;
    try {
      const snapshot = await this.client.getState();
      renderSnapshot(this.els, snapshot);
      this.renderCount += 1;
      this.lastRenderedIndex = Math.max(this.lastRenderedIndex, seen);
    } catch {
      renderConnection(this.els.connection, "lost");
    }
  }

  async submit(text: string): Promise<boolean> {
    let entry: HistoryEntry;
    try {
      const result = await this.client.submitCommand(text);
      entry = result.ok
        ? { text, ok: true, note: "accepted" }
        : { text, ok: false, note: `${result.error ?? "rejected"}${result.hint ? ` (try: ${result.hint})` : ""}` };
    } catch (err) {
      entry = { text, ok: false, note: `transport failure: ${String(err)} — retry` };
    }
    this.history.unshift(entry);
    if (this.historyList) {
      const { renderHistory } = await import("./view.js");
      renderHistory(this.historyList, this.history.slice(0, 20));
    }
    return entry.ok;
  }
}
