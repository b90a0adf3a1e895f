"""Action-semantics nets: the standard controller and the Move net.

Both nets share the controller skeleton: an action is enabled, becomes
ready, runs, and finishes, and can be suspended, resumed, or restarted
through external-input places while it runs. The Move net adds a motion
loop (Moving/Moved shuttling through the external Move transition and
the timed Wait transition) that keeps the motion backend serviced while
the action is ongoing.

Plain nets have no OR-joins, so two idioms recur here:

* a read arc is a consume+produce pair (Move requires Ongoing but does
  not take it);
* transitions that must drain a token that may sit in either of two
  places come in two variants sharing one hook (``SuspendT-from-Moving``
  / ``SuspendT-from-Moved``); ``logical_transition`` collapses the
  variant names for reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .petri import Arc, Marking, PetriNet, Place, PlaceKind, Transition, TransitionKind
from .pnml import PnmlDocument, serialize_pnml

MOVE_NET_ID = "move-xnet"
CONTROLLER_NET_ID = "standard-action-controller"

# Hook names bound by the problem solver.
HOOK_MOVE = "move"
HOOK_SUSPEND = "suspend"
HOOK_RESUME = "resume"
HOOK_RESTART = "restart"


@dataclass(frozen=True)
class StandardActionPlaces:
    """The controller's observable states and control inputs."""

    enabled: str = "Enabled"
    ready: str = "Ready"
    ongoing: str = "Ongoing"
    done: str = "Done"
    suspended: str = "Suspended"
    suspend: str = "Suspend"
    resume: str = "Resume"
    restart: str = "Restart"

    @property
    def control_inputs(self) -> tuple[str, ...]:
        return (self.suspend, self.resume, self.restart)

    @property
    def observed(self) -> tuple[str, ...]:
        return (self.ready, self.ongoing, self.done, self.suspended)


@dataclass(frozen=True)
class MoveXnetPlaces(StandardActionPlaces):
    moving: str = "Moving"
    moved: str = "Moved"
    arrived: str = "Arrived"


class Aspect(Enum):
    IMPENDING = "impending"
    ONGOING = "ongoing"
    SUSPENDED = "suspended"
    COMPLETED = "completed"
    INACTIVE = "inactive"


CONTROLLER_TRANSITIONS = ("Prepare", "Start", "SuspendT", "ResumeT", "RestartT", "Finish")


def logical_transition(transition_id: str) -> str:
    """Collapse drain-variant names (``X-from-Y``) to their logical id."""
    return transition_id.split("-from-", 1)[0]


def build_standard_controller() -> tuple[PetriNet, StandardActionPlaces, Marking]:
    """Generic action controller; completion is signalled on ``Complete``."""
    p = StandardActionPlaces()
    ein, eout = PlaceKind.EXTERNAL_INPUT, PlaceKind.EXTERNAL_OUTPUT
    places = [
        Place(p.enabled, ein), Place(p.suspend, ein), Place(p.resume, ein),
        Place(p.restart, ein), Place("Complete", ein),
        Place(p.ready, eout), Place(p.ongoing, eout), Place(p.done, eout),
        Place(p.suspended, eout),
    ]
    transitions = [
        Transition("Prepare"),
        Transition("Start"),
        Transition("SuspendT", TransitionKind.EXTERNAL, hook_name=HOOK_SUSPEND),
        Transition("ResumeT", TransitionKind.EXTERNAL, hook_name=HOOK_RESUME),
        Transition("RestartT", TransitionKind.EXTERNAL, hook_name=HOOK_RESTART),
        Transition("Finish"),
    ]
    arcs = [
        Arc(p.enabled, "Prepare"), Arc("Prepare", p.ready),
        Arc(p.ready, "Start"), Arc("Start", p.ongoing),
        Arc(p.ongoing, "SuspendT"), Arc(p.suspend, "SuspendT"), Arc("SuspendT", p.suspended),
        Arc(p.suspended, "ResumeT"), Arc(p.resume, "ResumeT"), Arc("ResumeT", p.ongoing),
        Arc(p.suspended, "RestartT"), Arc(p.restart, "RestartT"), Arc("RestartT", p.ready),
        Arc(p.ongoing, "Finish"), Arc("Complete", "Finish"), Arc("Finish", p.done),
    ]
    net = PetriNet(places, transitions, arcs)
    return net, p, Marking.zero(net)


def build_move_xnet(wait_delay: int = 0) -> tuple[PetriNet, MoveXnetPlaces, Marking]:
    """The motion action net.

    ``Start`` seeds both Ongoing and the motion loop; ``Move`` (external)
    pulses the motion backend while Ongoing holds; ``Wait`` (timed,
    ``wait_delay`` ticks) throttles the loop. Suspension and completion
    drain the loop token wherever it sits, via the two-variant idiom.
    """
    p = MoveXnetPlaces()
    ein, eout = PlaceKind.EXTERNAL_INPUT, PlaceKind.EXTERNAL_OUTPUT
    places = [
        Place(p.enabled, ein), Place(p.suspend, ein), Place(p.resume, ein),
        Place(p.restart, ein), Place(p.arrived, ein),
        Place(p.ready, eout), Place(p.ongoing, eout), Place(p.done, eout),
        Place(p.suspended, eout),
        Place(p.moving), Place(p.moved),
    ]
    transitions = [
        Transition("Prepare"),
        Transition("Start"),
        Transition("Move", TransitionKind.EXTERNAL, hook_name=HOOK_MOVE),
        Transition("Wait", TransitionKind.TIMED, delay=wait_delay),
        Transition("SuspendT-from-Moving", TransitionKind.EXTERNAL, hook_name=HOOK_SUSPEND),
        Transition("SuspendT-from-Moved", TransitionKind.EXTERNAL, hook_name=HOOK_SUSPEND),
        Transition("ResumeT", TransitionKind.EXTERNAL, hook_name=HOOK_RESUME),
        Transition("RestartT", TransitionKind.EXTERNAL, hook_name=HOOK_RESTART),
        Transition("Finish-from-Moving"),
        Transition("Finish-from-Moved"),
    ]
    arcs = [
        Arc(p.enabled, "Prepare"), Arc("Prepare", p.ready),
        # Start populates both the controller state and the motion loop.
        Arc(p.ready, "Start"), Arc("Start", p.ongoing), Arc("Start", p.moving),
        # Motion loop; Move holds a read arc on Ongoing.
        Arc(p.moving, "Move"), Arc(p.ongoing, "Move"),
        Arc("Move", p.moved), Arc("Move", p.ongoing),
        Arc(p.moved, "Wait"), Arc("Wait", p.moving),
        # Suspension drains Ongoing plus the loop token, wherever it sits.
        Arc(p.ongoing, "SuspendT-from-Moving"), Arc(p.suspend, "SuspendT-from-Moving"),
        Arc(p.moving, "SuspendT-from-Moving"), Arc("SuspendT-from-Moving", p.suspended),
        Arc(p.ongoing, "SuspendT-from-Moved"), Arc(p.suspend, "SuspendT-from-Moved"),
        Arc(p.moved, "SuspendT-from-Moved"), Arc("SuspendT-from-Moved", p.suspended),
        # Resume re-enters Ongoing and re-seeds the loop.
        Arc(p.suspended, "ResumeT"), Arc(p.resume, "ResumeT"),
        Arc("ResumeT", p.ongoing), Arc("ResumeT", p.moving),
        # Restart routes back through Ready and Start.
        Arc(p.suspended, "RestartT"), Arc(p.restart, "RestartT"), Arc("RestartT", p.ready),
        # Completion consumes Arrived and empties the motion loop.
        Arc(p.ongoing, "Finish-from-Moving"), Arc(p.arrived, "Finish-from-Moving"),
        Arc(p.moving, "Finish-from-Moving"), Arc("Finish-from-Moving", p.done),
        Arc(p.ongoing, "Finish-from-Moved"), Arc(p.arrived, "Finish-from-Moved"),
        Arc(p.moved, "Finish-from-Moved"), Arc("Finish-from-Moved", p.done),
    ]
    net = PetriNet(places, transitions, arcs)
    return net, p, Marking.zero(net)


def aspect_of(places: StandardActionPlaces, marking: Marking) -> Aspect:
    """Classify a marking into the linguistic state of the action."""
    if marking.get(places.done, 0) >= 1:
        return Aspect.COMPLETED
    if marking.get(places.suspended, 0) >= 1:
        return Aspect.SUSPENDED
    if marking.get(places.ongoing, 0) >= 1:
        return Aspect.ONGOING
    if marking.get(places.enabled, 0) >= 1 or marking.get(places.ready, 0) >= 1:
        return Aspect.IMPENDING
    return Aspect.INACTIVE


def move_xnet_document(wait_delay: int = 0) -> PnmlDocument:
    net, _, marking = build_move_xnet(wait_delay)
    return PnmlDocument.single(net, marking, MOVE_NET_ID)


def controller_document() -> PnmlDocument:
    net, _, marking = build_standard_controller()
    return PnmlDocument.single(net, marking, CONTROLLER_NET_ID)


def write_fixture_documents(directory: str | Path) -> list[Path]:
    """Emit the canonical net documents; fixtures never drift from builders."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in (("move_xnet.pnml", move_xnet_document()),
                      ("standard_controller.pnml", controller_document())):
        path = directory / name
        path.write_bytes(serialize_pnml(doc))
        written.append(path)
    return written
