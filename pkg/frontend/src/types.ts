/** Wire types mirroring the control service's JSON bodies. */

export interface LogRecord {
  index: number;
  tick: number;
  kind: string;
  detail: Record<string, unknown>;
}

export interface WorldObjectView {
  name: string;
  color: string;
  position: [number, number];
  radius: number;
}

export interface WorldView {
  robot: { position: [number, number]; velocity: [number, number] };
  waypoints: [number, number][];
  objects: WorldObjectView[];
  proximity_threshold: number;
  arrived: boolean;
}

export interface ChannelView {
  target_operation: string;
  target_position: [number, number] | null;
  current_position: [number, number];
  speed: number;
}

export interface SystemSnapshot {
  time: number;
  aspect: string;
  marking: Record<string, number> | null;
  world: WorldView;
  goal: string | null;
  channel: ChannelView;
  recent_events: LogRecord[];
}

export interface CommandResult {
  ok: boolean;
  actspec?: Record<string, unknown>;
  error?: string;
  hint?: string;
}

export type ConnectionStatus = "connecting" | "live" | "lost";
