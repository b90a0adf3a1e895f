/** DOM rendering. Pure presentation: every displayed fact comes from a
 * snapshot or an event record; nothing is computed here beyond layout. */

import type { ConnectionStatus, LogRecord, SystemSnapshot, WorldView } from "./types.js";

const ASPECTS = ["impending", "ongoing", "suspended", "completed", "inactive"];

export function renderAspect(badge: HTMLElement, aspect: string): void {
  badge.textContent = aspect;
  badge.className = `badge aspect-${ASPECTS.includes(aspect) ? aspect : "unknown"}`;
}

export function renderConnection(el: HTMLElement, status: ConnectionStatus): void {
  el.textContent = status === "live" ? "connected" : status;
  el.className = `conn conn-${status}`;
}

export function renderMarking(table: HTMLElement, marking: Record<string, number> | null): void {
  if (marking === null) {
    table.innerHTML = "<tr><td class='empty' colspan='2'>no net loaded</td></tr>";
    return;
  }
  const rows = Object.keys(marking)
    .sort()
    .map((place) => {
      const count = marking[place] ?? 0;
      const cls = count > 0 ? "marked" : "unmarked";
      return `<tr class="${cls}" data-place="${place}"><td>${place}</td><td>${count}</td></tr>`;
    });
  table.innerHTML = rows.join("");
}

export function appendEvents(feed: HTMLElement, records: LogRecord[], limit = 200): void {
  for (const record of records) {
    const line = feed.ownerDocument.createElement("div");
    line.className = `event event-${record.kind}`;
    line.textContent = `#${record.index} [${record.tick}] ${record.kind} ${JSON.stringify(record.detail)}`;
    feed.appendChild(line);
  }
  while (feed.childNodes.length > limit) {
    feed.removeChild(feed.firstChild as Node);
  }
  (feed as HTMLElement & { scrollTop: number }).scrollTop = feed.scrollHeight ?? 0;
}

export interface HistoryEntry {
  text: string;
  ok: boolean;
  note: string;
}

export function renderHistory(list: HTMLElement, entries: HistoryEntry[]): void {
  list.innerHTML = entries
    .map((e) => `<li class="${e.ok ? "ok" : "rejected"}"><code>${e.text}</code> &mdash; ${e.note}</li>`)
    .join("");
}

/** World canvas: boxes, robot, remaining trajectory, goal ring. */
export function renderWorld(canvas: HTMLCanvasElement, world: WorldView): void {
  let ctx: CanvasRenderingContext2D | null = null;
  try {
    ctx = canvas.getContext("2d");
  } catch {
    return; // non-rendering DOM (tests)
  }
  if (!ctx) return;

  const pad = 30;
  const xs = [world.robot.position[0], ...world.objects.map((o) => o.position[0])];
  const ys = [world.robot.position[1], ...world.objects.map((o) => o.position[1])];
  const minX = Math.min(...xs) - 2;
  const maxX = Math.max(...xs) + 2;
  const minY = Math.min(...ys) - 2;
  const maxY = Math.max(...ys) + 2;
  const scale = Math.min(
    (canvas.width - 2 * pad) / (maxX - minX),
    (canvas.height - 2 * pad) / (maxY - minY),
  );
  const px = (x: number) => pad + (x - minX) * scale;
  const py = (y: number) => canvas.height - pad - (y - minY) * scale;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#fafafa";
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  // Remaining trajectory.
  if (world.waypoints.length > 0) {
    ctx.strokeStyle = "#888";
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    ctx.moveTo(px(world.robot.position[0]), py(world.robot.position[1]));
    for (const [wx, wy] of world.waypoints) ctx.lineTo(px(wx), py(wy));
    ctx.stroke();
    ctx.setLineDash([]);
  }

  // Boxes.
  for (const obj of world.objects) {
    const r = obj.radius * scale;
    ctx.fillStyle = obj.color;
    ctx.globalAlpha = 0.8;
    ctx.fillRect(px(obj.position[0]) - r, py(obj.position[1]) - r, 2 * r, 2 * r);
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#333";
    ctx.font = "11px sans-serif";
    ctx.fillText(obj.name, px(obj.position[0]) - r, py(obj.position[1]) - r - 4);
  }

  // Robot with heading tick.
  const [rx, ry] = world.robot.position;
  const [vx, vy] = world.robot.velocity;
  ctx.fillStyle = "#222";
  ctx.beginPath();
  ctx.arc(px(rx), py(ry), 7, 0, 2 * Math.PI);
  ctx.fill();
  const speed = Math.hypot(vx, vy);
  if (speed > 0) {
    ctx.strokeStyle = "#d22";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(px(rx), py(ry));
    ctx.lineTo(px(rx + (vx / speed) * 0.8), py(ry + (vy / speed) * 0.8));
    ctx.stroke();
    ctx.lineWidth = 1;
  }
}

export interface ConsoleElements {
  aspect: HTMLElement;
  connection: HTMLElement;
  marking: HTMLElement;
  feed: HTMLElement;
  history: HTMLElement;
  canvas: HTMLCanvasElement;
  clock: HTMLElement;
}

export function renderSnapshot(els: ConsoleElements, snapshot: SystemSnapshot): void {
  renderAspect(els.aspect, snapshot.aspect);
  renderMarking(els.marking, snapshot.marking);
  renderWorld(els.canvas, snapshot.world);
  els.clock.textContent = `t=${snapshot.time.toFixed(1)}s` +
    (snapshot.goal ? ` → ${snapshot.goal}` : "");
}
