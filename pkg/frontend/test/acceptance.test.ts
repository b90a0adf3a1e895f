// @vitest-environment happy-dom
/** Live acceptance against a running control service.
 *
 * Start the service first, e.g.:
 *   xnet-robot --world src/xnet/fixtures/worlds/lab.yaml \
 *     --scenario src/xnet/fixtures/scenarios/redirect.yaml \
 *     --serve 127.0.0.1:8080 --pace 10
 * then: SERVICE_URL=http://127.0.0.1:8080 npm run acceptance
 */

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { ConsoleController } from "../src/app.js";
import { ServiceClient } from "../src/client.js";
import type { ConsoleElements } from "../src/view.js";

const SERVICE_URL = process.env.SERVICE_URL;

function elements(): ConsoleElements {
  document.body.innerHTML = `
    <span id="aspect"></span><span id="connection"></span><span id="clock"></span>
    <table><tbody id="marking"></tbody></table><div id="feed"></div><ul id="history"></ul>
    <canvas id="world" width="300" height="200"></canvas>`;
  return {
    aspect: document.getElementById("aspect")!,
    connection: document.getElementById("connection")!,
    marking: document.getElementById("marking")!,
    feed: document.getElementById("feed")!,
    history: document.getElementById("history")!,
    canvas: document.getElementById("world") as HTMLCanvasElement,
    clock: document.getElementById("clock")!,
  };
}

describe.skipIf(!SERVICE_URL)("console against a live service", () => {
  let controller: ConsoleController;
  let els: ConsoleElements;

  beforeEach(async () => {
    els = elements();
    controller = new ConsoleController(els, new ServiceClient(SERVICE_URL!), {
      refreshDebounceMs: 100,
    });
    await controller.start();
  });

  afterEach(() => {
    controller.stop();
  });

  it("rendered marking lags /events by at most 500 ms", { timeout: 20000 }, async () => {
    // Timestamp each record as it arrives, then watch for the render
    // that covers it; the gap is the console's lag behind /events.
    controller.stop();
    els = elements();
    const arrivals = new Map<number, number>();
    const real = new ServiceClient(SERVICE_URL!);
    const backend = {
      getState: () => real.getState(),
      submitCommand: (text: string) => real.submitCommand(text),
      streamEvents: (
        handlers: Parameters<ServiceClient["streamEvents"]>[0],
        signal: AbortSignal,
      ) =>
        real.streamEvents(
          {
            onRecord: (record) => {
              arrivals.set(record.index, Date.now());
              handlers.onRecord(record);
            },
            onStatus: handlers.onStatus,
          },
          signal,
        ),
    };
    controller = new ConsoleController(els, backend, { refreshDebounceMs: 100 });
    await controller.start();
    // Guarantee event traffic whatever phase the scripted run is in.
    expect(await controller.submit("Robot1, move to the blue box!")).toBe(true);

    const lags: number[] = [];
    const measured = new Set<number>();
    const deadline = Date.now() + 8000;
    while (Date.now() < deadline && lags.length < 30) {
      const rendered = controller.lastRenderedIndex;
      const now = Date.now();
      for (const [index, arrivedAt] of arrivals) {
        if (index <= rendered && !measured.has(index)) {
          measured.add(index);
          lags.push(now - arrivedAt);
        }
      }
      await new Promise((r) => setTimeout(r, 10));
    }
    expect(lags.length).toBeGreaterThan(0);
    for (const lag of lags) {
      expect(lag).toBeLessThanOrEqual(500);
    }
  });

  it("stop command flips the aspect badge to suspended within 1 s", { timeout: 20000 }, async () => {
    // Wait for motion to be in progress; if the scripted run already
    // finished, steer the robot ourselves (the same operator loop).
    let motionDeadline = Date.now() + 3000;
    while (els.aspect.textContent !== "ongoing" && Date.now() < motionDeadline) {
      await new Promise((r) => setTimeout(r, 25));
    }
    if (els.aspect.textContent !== "ongoing") {
      expect(await controller.submit("Robot1, move to the blue box!")).toBe(true);
      motionDeadline = Date.now() + 5000;
      while (els.aspect.textContent !== "ongoing" && Date.now() < motionDeadline) {
        await new Promise((r) => setTimeout(r, 25));
      }
    }
    expect(els.aspect.textContent).toBe("ongoing");

    const ok = await controller.submit("Robot1, stop moving!");
    expect(ok).toBe(true);
    const t0 = Date.now();
    while (els.aspect.textContent !== "suspended" && Date.now() - t0 < 1500) {
      await new Promise((r) => setTimeout(r, 10));
    }
    const elapsed = Date.now() - t0;
    expect(els.aspect.textContent).toBe("suspended");
    expect(elapsed).toBeLessThanOrEqual(1000);
  });
});
