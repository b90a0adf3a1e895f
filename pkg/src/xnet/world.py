"""Deterministic 2D kinematic robot world.

Fixed-step integration toward a waypoint list with clamping (the robot
never overshoots a waypoint within a step), arrival detection on the
final waypoint, and an edge-triggered proximity sensor: one event per
object per continuous approach episode, re-armed when the robot leaves
the threshold disk. Objects are static circles.

Exactly one activity may call ``tick``/``apply_channel``; readers take
``snapshot()``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import yaml

from .channel import MotionChannel

Point = tuple[float, float]

DEFAULT_DT = 0.1
DEFAULT_PROXIMITY_THRESHOLD = 1.0


@dataclass(frozen=True)
class WorldObject:
    name: str
    color: str
    position: Point
    radius: float


@dataclass(frozen=True)
class ProximityEvent:
    name: str
    color: str
    position: Point
    size: float
    detection_time: float


@dataclass(frozen=True)
class ArrivalEvent:
    position: Point
    time: float


@dataclass(frozen=True)
class WorldState:
    """Immutable snapshot handed to readers."""

    robot_position: Point
    robot_velocity: Point
    waypoints: tuple[Point, ...]
    objects: tuple[WorldObject, ...]
    proximity_threshold: float
    time: float
    arrived: bool


def _dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def segment_point_distance(a: Point, b: Point, p: Point) -> float:
    """Minimum distance from point ``p`` to segment ``a``-``b``."""
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    seg_len_sq = dx * dx + dy * dy
    if seg_len_sq == 0.0:
        return _dist(a, p)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / seg_len_sq
    t = max(0.0, min(1.0, t))
    return _dist((ax + t * dx, ay + t * dy), p)


class World:
    """Single-robot kinematic world standing in for a full simulator."""

    def __init__(self, robot_position: Point = (0.0, 0.0),
                 objects: list[WorldObject] | None = None,
                 proximity_threshold: float = DEFAULT_PROXIMITY_THRESHOLD,
                 initially_known: set[str] | None = None):
        self._position: Point = tuple(robot_position)
        self._velocity: Point = (0.0, 0.0)
        self._waypoints: list[Point] = []
        self._speed = 0.0
        self._suspended = False
        self._time = 0.0
        self._arrived = False
        self.objects: dict[str, WorldObject] = {o.name: o for o in (objects or [])}
        self.proximity_threshold = proximity_threshold
        self.initially_known = (set(self.objects) if initially_known is None
                                else set(initially_known))
        self._inside: set[str] = set()  # objects currently within the threshold disk

    # -- readers -----------------------------------------------------------

    @property
    def robot_position(self) -> Point:
        return self._position

    @property
    def time(self) -> float:
        return self._time

    @property
    def arrived(self) -> bool:
        return self._arrived

    @property
    def remaining_waypoints(self) -> tuple[Point, ...]:
        return tuple(self._waypoints)

    def snapshot(self) -> WorldState:
        return WorldState(
            robot_position=self._position,
            robot_velocity=self._velocity,
            waypoints=tuple(self._waypoints),
            objects=tuple(self.objects[k] for k in sorted(self.objects)),
            proximity_threshold=self.proximity_threshold,
            time=self._time,
            arrived=self._arrived,
        )

    # -- control -----------------------------------------------------------

    def apply_channel(self, channel: MotionChannel, waypoints: list[Point] | None = None) -> None:
        """Act on the channel's target operation.

        move/restart with a waypoint list installs a new route at the
        channel speed; with None the current route just keeps going.
        suspend freezes in place (route retained); resume re-aims at the
        current waypoint, so the pre-suspend heading is restored exactly.
        """
        op = channel.target_operation
        if op == "none":
            return
        if op in ("move", "restart"):
            self._speed = channel.speed
            if waypoints is not None:
                route = [tuple(w) for w in waypoints]
                while route and _dist(self._position, route[0]) == 0.0:
                    route.pop(0)  # degenerate leading waypoints
                self._waypoints = route
                self._arrived = not route
            self._suspended = False
            self._aim()
        elif op == "suspend":
            self._suspended = True
            self._velocity = (0.0, 0.0)
        elif op == "resume":
            self._suspended = False
            self._aim()
        else:
            raise ValueError(f"bad channel operation {op!r}")
        channel.current_position = self._position

    def _aim(self) -> None:
        """Point the velocity at the current waypoint at the active speed."""
        if not self._waypoints or self._suspended:
            self._velocity = (0.0, 0.0)
            return
        wx, wy = self._waypoints[0]
        dx, dy = wx - self._position[0], wy - self._position[1]
        norm = math.hypot(dx, dy)
        if norm == 0.0:
            self._velocity = (0.0, 0.0)
            return
        self._velocity = (self._speed * dx / norm, self._speed * dy / norm)

    # -- integration -------------------------------------------------------

    def tick(self, dt: float) -> list[object]:
        """Advance by ``dt`` seconds; returns arrival/proximity events."""
        if dt <= 0:
            raise ValueError("dt must be positive")
        self._time += dt
        if self._velocity == (0.0, 0.0) or not self._waypoints:
            return []

        events: list[object] = []
        previous = self._position
        step = self._speed * dt
        target = self._waypoints[0]
        remaining = _dist(self._position, target)
        if step >= remaining - 1e-9:
            # Clamp to the waypoint: no overshoot, leftover step discarded.
            self._position = target
            self._waypoints.pop(0)
            if self._waypoints:
                self._aim()
            else:
                self._velocity = (0.0, 0.0)
                self._arrived = True
                events.append(ArrivalEvent(self._position, self._time))
        else:
            self._position = (previous[0] + self._velocity[0] * dt,
                              previous[1] + self._velocity[1] * dt)

        events.extend(self._proximity_events(previous, self._position))
        return events

    def _proximity_events(self, previous: Point, current: Point) -> list[ProximityEvent]:
        events = []
        for name in sorted(self.objects):
            obj = self.objects[name]
            swept = segment_point_distance(previous, current, obj.position)
            if swept < self.proximity_threshold:
                if name not in self._inside:
                    self._inside.add(name)
                    events.append(ProximityEvent(obj.name, obj.color, obj.position,
                                                 obj.radius, self._time))
            elif _dist(current, obj.position) >= self.proximity_threshold:
                self._inside.discard(name)
        return events


def load_world(path: str | Path) -> World:
    """Build a world from its YAML definition file."""
    path = Path(path)
    data = yaml.safe_load(path.read_text())
    if not isinstance(data, dict) or "robot" not in data:
        raise ValueError(f"world file {path} must define a robot")
    robot = data["robot"]
    objects = []
    known = set()
    for name, spec in (data.get("objects") or {}).items():
        objects.append(WorldObject(
            name=name,
            color=str(spec.get("color", "gray")),
            position=tuple(float(v) for v in spec["position"]),
            radius=float(spec.get("radius", 0.5)),
        ))
        if spec.get("known", True):
            known.add(name)
    return World(
        robot_position=tuple(float(v) for v in robot["position"]),
        objects=objects,
        proximity_threshold=float(data.get("proximity_threshold",
                                           DEFAULT_PROXIMITY_THRESHOLD)),
        initially_known=known,
    )
