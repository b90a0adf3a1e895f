"""The problem solver: turns ActSpecs into net inputs and drives motion.

Two logical activities share this object, mirroring the request/action
split: a queue consumer takes incoming ActSpecs, and the net interaction
path services hooks and world stepping. Both run under one lock, so no
hook and no request handler ever observes a half-updated channel or
world model.

The solver listens for every firing through the runner's synchronous
firing tap; the tap drains the request queue, which bounds the latency
between a request arriving and its translation into place updates to
less than two firings. In live mode a consumer thread and a world
stepper thread run as well; in stepped mode a driver calls ``advance``
with a virtual clock, which is what makes scripted scenarios
deterministic.
"""

from __future__ import annotations

import math
import queue
import threading
from dataclasses import dataclass, field

from .actions import (
    Aspect,
    HOOK_MOVE,
    HOOK_RESTART,
    HOOK_RESUME,
    HOOK_SUSPEND,
    MoveXnetPlaces,
    aspect_of,
    logical_transition,
    move_xnet_document,
)
from .channel import MotionChannel
from .commands import ActSpec
from .eventlog import EventLog
from .petri import Marking
from .runner import HookRegistry, Runner
from .world import ArrivalEvent, Point, ProximityEvent, World, segment_point_distance

SPEED_FACTORS = {"slow": 0.5, "normal": 1.0, "fast": 2.0}

_EPS = 1e-9


class PlanningError(Exception):
    """No admissible route to the requested goal."""


@dataclass
class SolverConfig:
    robot_name: str = "Robot1"
    speed_factors: dict = field(default_factory=lambda: dict(SPEED_FACTORS))
    arrival_tolerance: float = 0.1
    obstacle_inflation: float = 0.3
    wait_delay: int = 0
    dt: float = 0.1
    threaded: bool = False  # live mode: consumer + stepper threads, threaded runner
    pace: float | None = None  # runner ticks/second in live mode
    pump_budget: int = 32  # scheduling steps per stepped pump


@dataclass
class KnownObject:
    name: str
    color: str
    position: Point
    radius: float
    verified_at: float | None = None  # staleness marker: time of last sensor check


class WorldModel:
    """The solver's beliefs about the world; may lag the world itself."""

    def __init__(self, robot_position: Point, objects: dict[str, KnownObject]):
        self.robot_position = robot_position
        self.objects = objects

    @classmethod
    def from_world(cls, world: World) -> "WorldModel":
        objects = {
            name: KnownObject(name, obj.color, obj.position, obj.radius)
            for name, obj in world.objects.items()
            if name in world.initially_known
        }
        return cls(world.robot_position, objects)


def _same_route(a, b) -> bool:
    if len(a) != len(b):
        return False
    return all(math.hypot(p[0] - q[0], p[1] - q[1]) < 1e-6 for p, q in zip(a, b))


def plan_trajectory(model: WorldModel, start: Point, goal: Point,
                    ignore: frozenset[str] | set[str] = frozenset(),
                    inflation: float = 0.3) -> list[Point]:
    """Waypoints from start to goal against the known obstacles.

    Straight line when no inflated footprint blocks the segment;
    otherwise a two-segment detour around the first blocking object's
    bounding circle. ``ignore`` excludes the goal object itself.
    """
    for value in (*start, *goal):
        if not math.isfinite(value):
            raise PlanningError("start and goal must be finite")
    if math.hypot(goal[0] - start[0], goal[1] - start[1]) < _EPS:
        return []

    obstacles = [o for name, o in sorted(model.objects.items()) if name not in ignore]
    for obstacle in obstacles:
        if math.hypot(goal[0] - obstacle.position[0], goal[1] - obstacle.position[1]) \
                < obstacle.radius + inflation:
            raise PlanningError(f"goal lies inside the footprint of {obstacle.name!r}")

    blocking = None
    blocking_t = None
    dx, dy = goal[0] - start[0], goal[1] - start[1]
    seg_len_sq = dx * dx + dy * dy
    for obstacle in obstacles:
        r = obstacle.radius + inflation
        if math.hypot(start[0] - obstacle.position[0], start[1] - obstacle.position[1]) < r:
            continue  # already overlapping at the start: not detourable
        if segment_point_distance(start, goal, obstacle.position) < r:
            t = ((obstacle.position[0] - start[0]) * dx
                 + (obstacle.position[1] - start[1]) * dy) / seg_len_sq
            if blocking is None or t < blocking_t:
                blocking, blocking_t = obstacle, t
    if blocking is None:
        return [tuple(goal)]

    r = blocking.radius + inflation
    t = max(0.0, min(1.0, blocking_t))
    foot = (start[0] + t * dx, start[1] + t * dy)
    seg_len = math.sqrt(seg_len_sq)
    normal = (-dy / seg_len, dx / seg_len)
    side = ((blocking.position[0] - foot[0]) * normal[0]
            + (blocking.position[1] - foot[1]) * normal[1])
    if side > 0:  # detour on the side away from the obstacle centre
        normal = (-normal[0], -normal[1])
    for scale in (1.5, 2.0, 3.0, 4.0, 6.0):
        waypoint = (foot[0] + normal[0] * r * scale, foot[1] + normal[1] * r * scale)
        if (segment_point_distance(start, waypoint, blocking.position) >= r
                and segment_point_distance(waypoint, goal, blocking.position) >= r):
            return [waypoint, tuple(goal)]
    raise PlanningError(f"no detour found around {blocking.name!r}")


class Solver:
    def __init__(self, world: World, config: SolverConfig | None = None,
                 log: EventLog | None = None, notification_cb=None):
        self.world = world
        self.config = config or SolverConfig()
        self.log = log or EventLog()
        self.model = WorldModel.from_world(world)
        self.places = MoveXnetPlaces()
        self.channel = MotionChannel(current_position=world.robot_position)
        self.notifications: list[ActSpec] = []
        self._notification_cb = notification_cb
        self._queue: "queue.Queue[ActSpec]" = queue.Queue()
        self._lock = threading.RLock()
        self._runner: Runner | None = None
        self._place_streams: dict[str, object] = {}
        self._plan: list[Point] = []
        self._plan_dirty = False
        self._goal_name: str | None = None
        self._running = False
        self._threads: list[threading.Thread] = []
        self._hooks = HookRegistry({
            HOOK_MOVE: self._hook_move,
            HOOK_SUSPEND: self._hook_suspend,
            HOOK_RESUME: self._hook_resume,
            HOOK_RESTART: self._hook_restart,
        })

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> None:
        self._running = True
        if self.config.threaded:
            consumer = threading.Thread(target=self._consume_loop,
                                        name="solver-consumer", daemon=True)
            stepper = threading.Thread(target=self._step_loop,
                                       name="solver-stepper", daemon=True)
            self._threads = [consumer, stepper]
            consumer.start()
            stepper.start()

    def shutdown(self) -> None:
        self._running = False
        for thread in self._threads:
            thread.join(timeout=5)
        self._threads = []
        with self._lock:
            runner = self._runner
        # Stop outside the lock: the loop's in-flight hook may need it.
        if runner is not None and runner.running:
            runner.stop()

    # -- request intake -------------------------------------------------------

    def submit(self, spec: ActSpec) -> None:
        """Enqueue a request; the receipt record is adjacent to the put."""
        self.log.append_atomically("actspec-received", {"actspec": spec.to_json()},
                                   self._tick(), lambda: self._queue.put(spec))

    def firing_tap(self, event) -> None:
        """Runs on the runner loop after every firing (synchronous listener)."""
        self.log.append("transition-fired",
                        {"transition": logical_transition(event.transition),
                         "raw": event.transition},
                        tick=event.tick)
        self._drain_place_streams()
        self._drain_queue()

    def _drain_queue(self) -> None:
        while True:
            try:
                spec = self._queue.get_nowait()
            except queue.Empty:
                return
            self._handle(spec)

    def _consume_loop(self) -> None:
        while self._running:
            try:
                spec = self._queue.get(timeout=0.05)
            except queue.Empty:
                continue
            self._handle(spec)

    def _step_loop(self) -> None:
        import time
        dt = self.config.dt
        while self._running:
            started = time.monotonic()
            self.advance(dt)
            time.sleep(max(0.0, dt - (time.monotonic() - started)))

    def _handle(self, spec: ActSpec) -> None:
        self.log.append("actspec-handled", {"actspec": spec.to_json()}, self._tick())
        with self._lock:
            self.handle_actspec(spec)

    # -- stepped driving ------------------------------------------------------

    def advance(self, dt: float | None = None) -> None:
        """One virtual-clock step: requests, net, world, world events, net."""
        dt = dt or self.config.dt
        self._drain_queue()
        self._pump()
        with self._lock:
            events = self.world.tick(dt)
            self.model.robot_position = self.world.robot_position
            self.channel.current_position = self.world.robot_position
        for event in events:
            if isinstance(event, ArrivalEvent):
                self.log.append("world-arrival",
                                {"position": list(event.position), "time": event.time},
                                self._tick())
            elif isinstance(event, ProximityEvent):
                self.on_proximity_event(event)
        self._pump()
        self._drain_place_streams()

    def _pump(self) -> None:
        runner = self._runner
        if runner is not None and runner.running and not self.config.threaded:
            runner.pump(self.config.pump_budget)

    # -- request handling -----------------------------------------------------

    def handle_actspec(self, spec: ActSpec) -> None:
        """Translate one request into place updates (caller holds the lock)."""
        if spec.kind != "command":
            return
        if spec.agent.lower() != self.config.robot_name.lower():
            self._notify(f"unknown agent {spec.agent!r}; this operator controls "
                         f"{self.config.robot_name!r}")
            return
        predicate = "move" if spec.predicate == "redirect-implicit" else spec.predicate
        if predicate == "move":
            self._handle_move(spec)
        elif predicate == "stop":
            self._handle_stop()
        elif predicate == "continue":
            self._handle_continue()

    def _handle_move(self, spec: ActSpec) -> None:
        goal_name = self._find_goal(spec.goal.color)
        if goal_name is None:
            known = ", ".join(f"{o.name} ({o.color})" for o in
                              sorted(self.model.objects.values(), key=lambda o: o.name))
            self._notify(f"no known {spec.goal.color} box; known objects: {known or 'none'}")
            return
        aspect = self.aspect()
        if self._runner is None or aspect in (Aspect.COMPLETED, Aspect.INACTIVE):
            self.start_move(goal_name, spec.speed)
        else:
            # A second move while one is active is a redirection.
            self._redirect(goal_name, spec.speed,
                           restart_only=(aspect is Aspect.SUSPENDED))

    def _handle_stop(self) -> None:
        aspect = self.aspect()
        if self._runner is None or aspect is Aspect.INACTIVE:
            self._notify("no active action to stop")
            return
        if aspect is Aspect.COMPLETED:
            self._notify("action already complete; stop is a no-operation")
            return
        self._drain_control_places()
        self._mark(self.places.suspend)

    def _handle_continue(self) -> None:
        aspect = self.aspect()
        if self._runner is None or aspect is Aspect.INACTIVE:
            self._notify("no active action to continue")
            return
        if aspect is Aspect.COMPLETED:
            self._notify("action already complete; continue is a no-operation")
            return
        # Not-suspended is the documented race: the token sits unused
        # until the next command's hygiene sweep removes it.
        self._drain_control_places()
        self._mark(self.places.resume)

    def _find_goal(self, color: str) -> str | None:
        names = sorted(name for name, o in self.model.objects.items() if o.color == color)
        return names[0] if names else None

    # -- net lifecycle ----------------------------------------------------------

    def start_move(self, goal_name: str, speed: str) -> None:
        """Instantiate a Move net for the goal and set it running."""
        target = self.model.objects[goal_name].position
        try:
            plan = plan_trajectory(self.model, self.model.robot_position, target,
                                   ignore={goal_name}, inflation=self.config.obstacle_inflation)
        except PlanningError as exc:
            self._notify(f"cannot plan a route: {exc}")
            return
        if self._runner is not None:
            self._teardown_runner()
        self._goal_name = goal_name
        self._plan = plan
        self._plan_dirty = True
        self.channel.target_position = target
        self.channel.speed = self.config.speed_factors[speed]
        self.channel.set_operation("none")
        self.log.append("plan", {"goal": goal_name, "waypoints": [list(w) for w in plan],
                                 "speed": self.channel.speed}, self._tick())
        doc = move_xnet_document(self.config.wait_delay)
        runner = Runner.load(doc, self._hooks, self.channel,
                             threaded=self.config.threaded, pace=self.config.pace,
                             firing_tap=self.firing_tap)
        for place in self.places.observed:
            self._place_streams[place] = runner.subscribe_place(place)
        self._runner = runner
        runner.mark_place(self.places.enabled, 1)
        self.log.append("place-marked", {"place": self.places.enabled, "tokens": 1},
                        self._tick())
        runner.start()

    def _teardown_runner(self) -> None:
        runner = self._runner
        self._runner = None
        self._place_streams = {}
        if runner is not None and runner.running:
            runner.stop()

    def _redirect(self, goal_name: str, speed: str, restart_only: bool = False) -> None:
        target = self.model.objects[goal_name].position
        try:
            plan = plan_trajectory(self.model, self.model.robot_position, target,
                                   ignore={goal_name}, inflation=self.config.obstacle_inflation)
        except PlanningError as exc:
            self._notify(f"cannot plan a route: {exc}")
            return
        self._goal_name = goal_name
        self._plan = plan
        self._plan_dirty = True
        self.channel.target_position = target
        self.channel.speed = self.config.speed_factors[speed]
        self.log.append("plan", {"goal": goal_name, "waypoints": [list(w) for w in plan],
                                 "speed": self.channel.speed}, self._tick())
        self._drain_control_places(include_arrival=True)
        if not restart_only:
            self._mark(self.places.suspend)
        self._mark(self.places.restart)

    def _drain_control_places(self, include_arrival: bool = False) -> None:
        """Stale-token hygiene: clear control inputs before issuing new ones."""
        places = list(self.places.control_inputs)
        if include_arrival:
            places.append(self.places.arrived)
        for place in places:
            self._runner.clear_place(place)
            self.log.append("place-cleared", {"place": place}, self._tick())

    def _mark(self, place: str, tokens: int = 1) -> None:
        self._runner.mark_place(place, tokens)
        self.log.append("place-marked", {"place": place, "tokens": tokens}, self._tick())

    # -- hooks (run on the runner loop) -----------------------------------------

    def _hook_move(self, net, marking: Marking, channel: MotionChannel):
        with self._lock:
            channel.set_operation("move")
            if self._plan_dirty:
                self.world.apply_channel(channel, self._plan)
                self._plan_dirty = False
            else:
                self.world.apply_channel(channel, None)
            self._after_channel_op(channel)
            if (self.world.arrived and marking.get(self.places.arrived, 0) == 0
                    and self._at_target()):
                return [(self.places.arrived, 1)]
        return None

    def _at_target(self) -> bool:
        """The arrived flag only counts if it refers to the current goal."""
        target = self.channel.target_position
        if target is None:
            return False
        position = self.world.robot_position
        return math.hypot(position[0] - target[0],
                          position[1] - target[1]) <= self.config.arrival_tolerance

    def _hook_suspend(self, net, marking, channel: MotionChannel):
        with self._lock:
            channel.set_operation("suspend")
            self.world.apply_channel(channel)
            self._after_channel_op(channel)
        return None

    def _hook_resume(self, net, marking, channel: MotionChannel):
        with self._lock:
            channel.set_operation("resume")
            self.world.apply_channel(channel)
            self._after_channel_op(channel)
        return None

    def _hook_restart(self, net, marking, channel: MotionChannel):
        with self._lock:
            channel.set_operation("restart")
            self.world.apply_channel(channel, self._plan)
            self._plan_dirty = False
            self._after_channel_op(channel)
        return None

    def _after_channel_op(self, channel: MotionChannel) -> None:
        channel.current_position = self.world.robot_position
        self.model.robot_position = self.world.robot_position
        self.log.append("channel-op", {
            "op": channel.target_operation,
            "target": list(channel.target_position) if channel.target_position else None,
            "speed": channel.speed,
            "position": list(channel.current_position),
            "time": self.world.time,
        }, self._tick())

    # -- world events -------------------------------------------------------------

    def on_proximity_event(self, event: ProximityEvent) -> None:
        """Verify known objects; run the three-step protocol for unknown ones."""
        with self._lock:
            self.log.append("proximity-event",
                            {"name": event.name, "color": event.color,
                             "position": list(event.position), "size": event.size,
                             "time": event.detection_time}, self._tick())
            known = self.model.objects.get(event.name)
            if known is not None:
                moved = math.hypot(known.position[0] - event.position[0],
                                   known.position[1] - event.position[1]) > 1e-6
                if moved:
                    self.model.objects[event.name] = KnownObject(
                        event.name, event.color, event.position, event.size,
                        verified_at=event.detection_time)
                    self.log.append("model-update",
                                    {"name": event.name, "reason": "position-corrected"},
                                    self._tick())
                else:
                    known.verified_at = event.detection_time
                return
            # Unknown object: update the model, tell the operator, replan.
            self.model.objects[event.name] = KnownObject(
                event.name, event.color, event.position, event.size,
                verified_at=event.detection_time)
            self.log.append("model-update",
                            {"name": event.name, "color": event.color,
                             "position": list(event.position), "size": event.size,
                             "reason": "discovered"}, self._tick())
            self._notify(f"discovered new object {event.name!r} ({event.color})",
                         object={"name": event.name, "color": event.color,
                                 "position": list(event.position), "size": event.size})
            if self._goal_name is not None and self._runner is not None \
                    and self.aspect() in (Aspect.ONGOING, Aspect.IMPENDING):
                self._replan()

    def _replan(self) -> None:
        target = self.model.objects[self._goal_name].position
        try:
            plan = plan_trajectory(self.model, self.model.robot_position, target,
                                   ignore={self._goal_name},
                                   inflation=self.config.obstacle_inflation)
        except PlanningError as exc:
            self.log.append("replan", {"changed": False, "error": str(exc)}, self._tick())
            self._notify(f"cannot replan around new object: {exc}")
            return
        changed = not _same_route(plan, self.world.remaining_waypoints)
        self.log.append("replan", {"changed": changed,
                                   "waypoints": [list(w) for w in plan]}, self._tick())
        if changed:
            self._plan = plan
            self._plan_dirty = True
            self._drain_control_places(include_arrival=True)
            self._mark(self.places.suspend)
            self._mark(self.places.restart)

    # -- observation ---------------------------------------------------------------

    def _drain_place_streams(self) -> None:
        for place, stream in list(self._place_streams.items()):
            for event in stream.drain():
                self.log.append("place-event",
                                {"place": place, "count": event.new_count,
                                 "time": self.world.time},
                                tick=event.tick)

    def _notify(self, message: str, object: dict | None = None) -> None:
        spec = ActSpec(kind="notification", agent=self.config.robot_name,
                       message=message, object=object)
        self.notifications.append(spec)
        self.log.append("notification", {"actspec": spec.to_json()}, self._tick())
        if self._notification_cb is not None:
            self._notification_cb(spec)

    def _tick(self) -> int:
        runner = self._runner
        return runner.tick if runner is not None else 0

    def marking(self) -> Marking | None:
        runner = self._runner
        return runner.marking() if runner is not None else None

    def aspect(self) -> Aspect:
        marking = self.marking()
        return aspect_of(self.places, marking) if marking is not None else Aspect.INACTIVE

    def snapshot(self, recent: int = 20) -> dict:
        """Consistent view for the service layer: marking and aspect agree."""
        with self._lock:
            marking = self.marking()
            aspect = (aspect_of(self.places, marking) if marking is not None
                      else Aspect.INACTIVE)
            world = self.world.snapshot()
            records = self.log.records()[-recent:]
        return {
            "time": world.time,
            "aspect": aspect.value,
            "marking": dict(sorted(marking.items())) if marking is not None else None,
            "world": {
                "robot": {"position": list(world.robot_position),
                          "velocity": list(world.robot_velocity)},
                "waypoints": [list(w) for w in world.waypoints],
                "objects": [{"name": o.name, "color": o.color,
                             "position": list(o.position), "radius": o.radius}
                            for o in world.objects],
                "proximity_threshold": world.proximity_threshold,
                "arrived": world.arrived,
            },
            "goal": self._goal_name,
            "channel": self.channel.as_dict(),
            "recent_events": records,
        }
