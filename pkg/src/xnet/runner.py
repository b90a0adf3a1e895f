"""Live execution of one net: scheduling loop, external input, events.

The firing loop is a single logical thread; it can run on a background
thread (``threaded=True``, the default) or be driven step by step with
``pump()`` for deterministic scripted runs. External calls
(``mark_place``, ``clear_place``, ``stop``) are safe from any thread and
take effect at firing boundaries. Subscribers get per-stream ordered
queues; a slow consumer lags but never sees reordering. Queues are
unbounded: an abandoned stream on a busy net grows without limit, so
drop subscriptions you stop reading. Hooks run on the firing loop and
must not block indefinitely, or they stall all scheduling.

Scheduling per step: apply queued external updates, evaluate the enabled
set, then fire the lexicographically smallest eligible transition. A
timed transition is eligible once it has stayed enabled for its delay in
ticks. When an external transition fires its hook runs immediately after
the token move (still inside the step), so hooks always observe the
post-fire marking and may push further place updates before the next
firing is chosen. An empty enabled set parks the loop until new input
arrives; it does not stop execution.
"""

from __future__ import annotations

import threading
from collections import deque
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from enum import Enum

from .petri import Marking, PetriNet, PlaceKind, TransitionKind, UnknownNodeError
from .petri.kernel import KERNEL, dense_of
from .pnml import PnmlDocument


class RunnerError(Exception):
    """Base class for runner errors."""


class RunnerStateError(RunnerError):
    """Operation not valid in the runner's current state."""


class HookBindingError(RunnerError):
    """A net's external transitions are not all bound to hooks."""


class InterfaceViolationError(RunnerError):
    """External access to a place whose kind does not allow it."""


class EventKind(Enum):
    EXECUTION_STARTED = "execution-started"
    EXECUTION_STOPPED = "execution-stopped"
    TRANSITION_FIRED = "transition-fired"
    PLACE_MARKING_CHANGED = "place-marking-changed"


@dataclass(frozen=True)
class RunnerEvent:
    kind: EventKind
    tick: int
    transition: str | None = None
    place: str | None = None
    new_count: int | None = None

    def __post_init__(self):
        fired = self.kind is EventKind.TRANSITION_FIRED
        changed = self.kind is EventKind.PLACE_MARKING_CHANGED
        if fired != (self.transition is not None):
            raise ValueError("transition field present iff kind is transition-fired")
        if changed != (self.place is not None and self.new_count is not None):
            raise ValueError("place/new_count fields present iff kind is place-marking-changed")


# Hook: (net, post-fire marking snapshot, context) -> optional place updates.
HookFn = Callable[[PetriNet, Marking, object], Iterable[tuple[str, int]] | None]


class HookRegistry:
    """Named callbacks for external transitions."""

    def __init__(self, bindings: Mapping[str, HookFn] | None = None):
        self.bindings: dict[str, HookFn] = dict(bindings or {})

    def bind(self, name: str, fn: HookFn) -> "HookRegistry":
        self.bindings[name] = fn
        return self

    def missing_for(self, net: PetriNet) -> list[str]:
        wanted = {t.hook_name for t in net.transitions if t.kind is TransitionKind.EXTERNAL}
        return sorted(wanted - set(self.bindings))


class EventStream:
    """Ordered per-subscriber event queue, consumable from any thread."""

    def __init__(self):
        self._items: deque[RunnerEvent] = deque()
        self._cond = threading.Condition()

    def _put(self, event: RunnerEvent) -> None:
        with self._cond:
            self._items.append(event)
            self._cond.notify_all()

    def get(self, timeout: float | None = None) -> RunnerEvent | None:
        """Next event, or None on timeout."""
        with self._cond:
            if not self._items and not self._cond.wait_for(lambda: self._items, timeout):
                return None
            return self._items.popleft()

    def drain(self) -> list[RunnerEvent]:
        """All currently queued events, without blocking."""
        with self._cond:
            items = list(self._items)
            self._items.clear()
        return items

    def wait_for(self, predicate: Callable[[RunnerEvent], bool],
                 timeout: float | None = None) -> RunnerEvent | None:
        """Consume events until one matches; None on timeout."""
        import time
        end = None if timeout is None else time.monotonic() + timeout
        while True:
            remaining = None if end is None else max(0.0, end - time.monotonic())
            event = self.get(remaining)
            if event is None:
                return None
            if predicate(event):
                return event


class Runner:
    """Executes one net against a marking, per the module scheduling rules."""

    def __init__(self, net: PetriNet, initial_marking: Marking,
                 hooks: HookRegistry | None = None, context: object = None, *,
                 threaded: bool = True, pace: float | None = None,
                 firing_tap: Callable[[RunnerEvent], None] | None = None):
        hooks = hooks or HookRegistry()
        missing = hooks.missing_for(net)
        if missing:
            raise HookBindingError(f"external transitions without hooks: {missing}")
        initial_marking.check_covers(net)
        self.net = net
        self.context = context
        self._hooks = hooks
        self._dense = dense_of(net)
        self._vec = self._dense.vec(initial_marking)
        self._tick = 0
        self._pace = pace
        self._threaded = threaded
        self._firing_tap = firing_tap
        self._lock = threading.Condition()
        self._pending: deque[tuple[str, str, int]] = deque()  # (op, place, tokens)
        self._running = False
        self._stop_requested = False
        self._thread: threading.Thread | None = None
        self._global_streams: list[EventStream] = []
        self._place_streams: dict[str, list[EventStream]] = {}
        self._timed_since: dict[int, int] = {}
        self._timed_delay = {self._dense.transition_index[t.id]: t.delay
                             for t in net.transitions if t.kind is TransitionKind.TIMED}
        self._external_idx = {self._dense.transition_index[t.id]: t.hook_name
                              for t in net.transitions if t.kind is TransitionKind.EXTERNAL}
        self._place_kind = {p.id: p.kind for p in net.places}
        self.error: BaseException | None = None

    @classmethod
    def load(cls, doc: PnmlDocument, hooks: HookRegistry | None = None,
             context: object = None, net_id: str | None = None, **kwargs) -> "Runner":
        """Runner in the stopped state at the document's initial marking."""
        net_id = net_id or doc.net_ids[0]
        return cls(doc.net(net_id), doc.initial_marking(net_id), hooks, context, **kwargs)

    # -- observation ------------------------------------------------------

    def marking(self) -> Marking:
        with self._lock:
            return self._dense.marking(self._vec)

    @property
    def tick(self) -> int:
        return self._tick

    @property
    def running(self) -> bool:
        return self._running

    def subscribe_events(self) -> EventStream:
        stream = EventStream()
        with self._lock:
            self._global_streams.append(stream)
        return stream

    def subscribe_place(self, place_id: str) -> EventStream:
        if self._place_kind.get(place_id) is None:
            raise UnknownNodeError(f"unknown place {place_id!r}")
        if self._place_kind[place_id] is not PlaceKind.EXTERNAL_OUTPUT:
            raise InterfaceViolationError(f"place {place_id!r} is not external-output")
        stream = EventStream()
        with self._lock:
            self._place_streams.setdefault(place_id, []).append(stream)
        return stream

    # -- external input ----------------------------------------------------

    def mark_place(self, place_id: str, tokens: int = 1) -> None:
        """Add tokens to an external-input place at the next firing boundary."""
        if tokens < 1:
            raise ValueError("tokens must be a positive integer")
        self._check_external_input(place_id)
        with self._lock:
            if self._running:
                self._pending.append(("mark", place_id, tokens))
                self._lock.notify_all()
            else:
                self._apply_update("mark", place_id, tokens)

    def clear_place(self, place_id: str) -> None:
        """Reset an external-input place to zero tokens (stale-token hygiene)."""
        self._check_external_input(place_id)
        with self._lock:
            if self._running:
                self._pending.append(("clear", place_id, 0))
                self._lock.notify_all()
            else:
                self._apply_update("clear", place_id, 0)

    def _check_external_input(self, place_id: str) -> None:
        kind = self._place_kind.get(place_id)
        if kind is None:
            raise UnknownNodeError(f"unknown place {place_id!r}")
        if kind is not PlaceKind.EXTERNAL_INPUT:
            raise InterfaceViolationError(f"place {place_id!r} is not external-input")

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> None:
        # The loop thread is created, recorded and started while holding
        # the lock: a racing stop() then always finds a joinable thread.
        # The new thread's first action is to take this same lock, so the
        # started event below still precedes every firing event.
        with self._lock:
            if self._running:
                raise RunnerStateError("runner already started")
            self._running = True
            self._stop_requested = False
            self._emit(RunnerEvent(EventKind.EXECUTION_STARTED, self._tick))
            if self._threaded:
                self._thread = threading.Thread(target=self._run, name="xnet-runner",
                                                daemon=True)
                self._thread.start()

    def stop(self) -> None:
        """Halt after the in-flight firing completes."""
        with self._lock:
            if not self._running:
                raise RunnerStateError("runner is not started")
            self._stop_requested = True
            self._lock.notify_all()
        thread = self._thread
        if thread is not None and thread is not threading.current_thread():
            thread.join()
        elif thread is None:
            # Stepped mode: no loop thread to wind down.
            self._finish_stop()

    def _finish_stop(self) -> None:
        with self._lock:
            self._running = False
            self._thread = None
        self._emit(RunnerEvent(EventKind.EXECUTION_STOPPED, self._tick))

    # -- scheduling --------------------------------------------------------

    def _run(self) -> None:
        import time
        try:
            while True:
                with self._lock:
                    if self._stop_requested:
                        break
                outcome = self._step_once()
                if outcome == "quiescent":
                    with self._lock:
                        self._lock.wait_for(lambda: self._pending or self._stop_requested)
                elif self._pace:
                    time.sleep(1.0 / self._pace)
        except BaseException as exc:  # surfaced via .error; loop must not die silently
            self.error = exc
        finally:
            self._finish_stop()

    def pump(self, max_steps: int = 64) -> int:
        """Stepped mode: process up to ``max_steps`` scheduling steps.

        Returns the number of transitions fired; stops early at quiescence.
        """
        if self._threaded:
            raise RunnerStateError("pump() is only for runners created with threaded=False")
        with self._lock:
            if not self._running:
                raise RunnerStateError("runner is not started")
        fired = 0
        for _ in range(max_steps):
            outcome = self._step_once()
            if outcome == "quiescent":
                break
            if outcome == "fired":
                fired += 1
        return fired

    def _step_once(self) -> str:
        """One scheduling step: returns 'fired', 'waiting' or 'quiescent'."""
        changes: list[tuple[str, int]] = []
        with self._lock:
            while self._pending:
                op, place_id, tokens = self._pending.popleft()
                changes.append(self._apply_update(op, place_id, tokens, emit=False))
            enabled = KERNEL.enabled_indices(self._dense.w_in, self._vec,
                                             self._dense.n_transitions, self._dense.n_places)
        for place_id, count in [c for c in changes if c is not None]:
            self._emit_place_change(place_id, count)

        enabled_now = set(enabled)
        # A timed transition that lost its enabling restarts its clock.
        for t in list(self._timed_since):
            if t not in enabled_now:
                del self._timed_since[t]
        for t in enabled:
            if t in self._timed_delay:
                self._timed_since.setdefault(t, self._tick)

        chosen = -1
        for t in enabled:
            delay = self._timed_delay.get(t)
            if delay is None or self._tick - self._timed_since[t] >= delay:
                chosen = t
                break

        if chosen >= 0:
            self._fire_step(chosen)
            return "fired"
        if enabled:
            self._tick += 1  # only immature timed transitions: let time pass
            return "waiting"
        return "quiescent"

    def _fire_step(self, t: int) -> None:
        tick = self._tick
        dense = self._dense
        base = t * dense.n_places
        with self._lock:
            KERNEL.fire(dense.w_in, dense.w_out, self._vec, t, dense.n_places)
            self._timed_since.pop(t, None)
            touched = [(dense.place_ids[p], self._vec[p]) for p in range(dense.n_places)
                       if dense.w_in[base + p] != dense.w_out[base + p]]
            marking_after = dense.marking(self._vec)

        hook_changes: list[tuple[str, int]] = []
        hook_name = self._external_idx.get(t)
        if hook_name is not None:
            requests = self._hooks.bindings[hook_name](self.net, marking_after, self.context)
            for place_id, tokens in requests or ():
                self._check_external_input(place_id)
                with self._lock:
                    hook_changes.append(self._apply_update("mark", place_id, tokens, emit=False))

        fired_event = RunnerEvent(EventKind.TRANSITION_FIRED, tick,
                                  transition=dense.transition_ids[t])
        self._emit(fired_event)
        for place_id, count in touched:
            self._emit_place_change(place_id, count)
        for place_id, count in [c for c in hook_changes if c is not None]:
            self._emit_place_change(place_id, count)
        self._tick = tick + 1
        if self._firing_tap is not None:
            self._firing_tap(fired_event)

    def _apply_update(self, op: str, place_id: str, tokens: int, emit: bool = True):
        """Apply a mark/clear; caller holds the lock when the loop runs."""
        p = self._dense.place_index[place_id]
        before = self._vec[p]
        self._vec[p] = before + tokens if op == "mark" else 0
        if self._vec[p] == before:
            return None
        if emit:
            self._emit_place_change(place_id, self._vec[p])
            return None
        return (place_id, self._vec[p])

    # -- event fan-out -----------------------------------------------------

    def _emit(self, event: RunnerEvent) -> None:
        with self._lock:
            streams = list(self._global_streams)
        for stream in streams:
            stream._put(event)

    def _emit_place_change(self, place_id: str, count: int) -> None:
        event = RunnerEvent(EventKind.PLACE_MARKING_CHANGED, self._tick,
                            place=place_id, new_count=count)
        if self._place_kind[place_id] is not PlaceKind.PLAIN:
            self._emit(event)
        with self._lock:
            streams = list(self._place_streams.get(place_id, ()))
        for stream in streams:
            stream._put(event)
