"""Runner: scheduling loop, external input, event streams, hooks, timing."""

import threading
import time

import pytest

from xnet.petri import Arc, Marking, PetriNet, Place, PlaceKind, Transition, TransitionKind
from xnet.petri.semantics import fire
from xnet.pnml import PnmlDocument
from xnet.runner import (
    EventKind,
    HookBindingError,
    HookRegistry,
    InterfaceViolationError,
    Runner,
    RunnerStateError,
)


def join_doc():
    net = PetriNet(
        [Place("a"), Place("b"), Place("c", PlaceKind.EXTERNAL_OUTPUT)],
        [Transition("t")],
        [Arc("a", "t"), Arc("b", "t"), Arc("t", "c")],
    )
    return PnmlDocument.single(net, Marking({"a": 1, "b": 1, "c": 0}))


def cycle_doc():
    net = PetriNet(
        [Place("A"), Place("B")],
        [Transition("t1"), Transition("t2")],
        [Arc("A", "t1"), Arc("t1", "B"), Arc("B", "t2"), Arc("t2", "A")],
    )
    return PnmlDocument.single(net, Marking({"A": 1, "B": 0}))


def control_doc():
    """One external-input place gating an external transition."""
    net = PetriNet(
        [Place("go", PlaceKind.EXTERNAL_INPUT), Place("done", PlaceKind.EXTERNAL_OUTPUT)],
        [Transition("act", TransitionKind.EXTERNAL, hook_name="on_act")],
        [Arc("go", "act"), Arc("act", "done")],
    )
    return PnmlDocument.single(net, Marking({"go": 0, "done": 0}))


def test_load_rejects_unbound_hooks():
    with pytest.raises(HookBindingError, match="on_act"):
        Runner.load(control_doc(), HookRegistry(), threaded=False)


def test_load_without_external_transitions_needs_no_hooks():
    runner = Runner.load(join_doc(), threaded=False)
    assert dict(runner.marking()) == {"a": 1, "b": 1, "c": 0}
    assert not runner.running


def test_join_fires_once_then_quiesces():
    runner = Runner.load(join_doc(), threaded=False)
    events = runner.subscribe_events()
    runner.start()
    assert runner.pump() == 1
    assert dict(runner.marking()) == {"a": 0, "b": 0, "c": 1}
    runner.stop()
    kinds = [e.kind for e in events.drain()]
    assert kinds[0] is EventKind.EXECUTION_STARTED
    assert EventKind.TRANSITION_FIRED in kinds
    assert kinds[-1] is EventKind.EXECUTION_STOPPED


def test_immediate_cycle_alternates_until_stopped():
    runner = Runner.load(cycle_doc(), threaded=False)
    events = runner.subscribe_events()
    runner.start()
    runner.pump(max_steps=6)
    runner.stop()
    fired = [e.transition for e in events.drain() if e.kind is EventKind.TRANSITION_FIRED]
    assert fired == ["t1", "t2", "t1", "t2", "t1", "t2"]


def test_start_and_stop_state_errors():
    runner = Runner.load(join_doc(), threaded=False)
    with pytest.raises(RunnerStateError):
        runner.stop()
    runner.start()
    with pytest.raises(RunnerStateError):
        runner.start()
    runner.stop()
    with pytest.raises(RunnerStateError):
        runner.stop()


def test_mark_place_requires_external_input():
    runner = Runner.load(join_doc(), threaded=False)
    with pytest.raises(InterfaceViolationError):
        runner.mark_place("a", 1)  # plain place
    with pytest.raises(InterfaceViolationError):
        runner.mark_place("c", 1)  # external-output place


def test_subscribe_place_requires_external_output():
    runner = Runner.load(control_doc(), HookRegistry({"on_act": lambda *a: None}),
                         threaded=False)
    with pytest.raises(InterfaceViolationError):
        runner.subscribe_place("go")
    runner.subscribe_place("done")


def test_mark_wakes_quiesced_runner_and_drives_hook():
    seen = []

    def on_act(net, marking, context):
        seen.append((dict(marking), context))
        return None

    runner = Runner.load(control_doc(), HookRegistry({"on_act": on_act}),
                         context="ctx", threaded=False)
    done_stream = runner.subscribe_place("done")
    runner.start()
    assert runner.pump() == 0  # quiescent: gate not marked
    runner.mark_place("go", 1)
    assert runner.pump() == 1
    assert seen == [({"go": 0, "done": 1}, "ctx")]  # hook sees post-fire marking
    event = done_stream.get(timeout=1)
    assert event.place == "done" and event.new_count == 1
    runner.stop()


def test_hook_place_requests_apply_before_next_choice():
    """A hook marking another gate keeps the net running."""
    net = PetriNet(
        [Place("go", PlaceKind.EXTERNAL_INPUT), Place("go2", PlaceKind.EXTERNAL_INPUT),
         Place("out", PlaceKind.EXTERNAL_OUTPUT)],
        [Transition("first", TransitionKind.EXTERNAL, hook_name="chain"),
         Transition("second"),],
        [Arc("go", "first"), Arc("go2", "second"), Arc("second", "out")],
    )
    doc = PnmlDocument.single(net, Marking({"go": 0, "go2": 0, "out": 0}))
    hooks = HookRegistry({"chain": lambda n, m, c: [("go2", 1)]})
    runner = Runner.load(doc, hooks, threaded=False)
    runner.start()
    runner.mark_place("go", 1)
    assert runner.pump() == 2  # first fires, hook gates second
    assert runner.marking()["out"] == 1
    runner.stop()


def test_timed_transition_waits_delay_ticks():
    net = PetriNet(
        [Place("p"), Place("q")],
        [Transition("w", TransitionKind.TIMED, delay=5)],
        [Arc("p", "w"), Arc("w", "q")],
    )
    doc = PnmlDocument.single(net, Marking({"p": 1, "q": 0}))
    runner = Runner.load(doc, threaded=False)
    events = runner.subscribe_events()
    runner.start()
    runner.pump(max_steps=20)
    fired = [e for e in events.drain() if e.kind is EventKind.TRANSITION_FIRED]
    assert len(fired) == 1
    assert fired[0].tick >= 5  # at least `delay` ticks elapsed before firing
    assert runner.marking()["q"] == 1


def test_timed_transition_does_not_fire_if_disabled_meanwhile():
    net = PetriNet(
        [Place("p"), Place("q"), Place("r")],
        [Transition("grab"), Transition("w", TransitionKind.TIMED, delay=3)],
        [Arc("p", "grab"), Arc("grab", "r"), Arc("p", "w"), Arc("w", "q")],
    )
    doc = PnmlDocument.single(net, Marking({"p": 1, "q": 0, "r": 0}))
    runner = Runner.load(doc, threaded=False)
    runner.start()
    runner.pump(max_steps=10)
    m = runner.marking()
    assert m["r"] == 1 and m["q"] == 0  # the immediate transition won the token


def test_replay_property():
    """Events fully determine state: fold fire() and external deltas."""
    doc = cycle_doc()
    runner = Runner.load(doc, threaded=False)
    events = runner.subscribe_events()
    runner.start()
    runner.pump(max_steps=9)
    runner.stop()
    marking = dict(doc.initial_markings[0])
    net = doc.nets[0]
    for event in events.drain():
        if event.kind is EventKind.TRANSITION_FIRED:
            marking = dict(fire(net, Marking(marking), event.transition))
        elif event.kind is EventKind.PLACE_MARKING_CHANGED:
            marking[event.place] = event.new_count
    assert marking == dict(runner.marking())


def test_threaded_runner_latency_and_external_input():
    """Threaded mode: marks are never lost and stop lands cleanly."""
    doc = control_doc()
    fired = threading.Event()
    hooks = HookRegistry({"on_act": lambda n, m, c: fired.set()})
    runner = Runner.load(doc, hooks, threaded=True)
    stream = runner.subscribe_place("done")
    runner.start()
    runner.mark_place("go", 1)
    assert fired.wait(timeout=2.0)
    event = stream.get(timeout=2.0)
    assert event is not None and event.new_count == 1
    runner.stop()
    assert not runner.running


def test_threaded_stop_during_quiescence():
    runner = Runner.load(join_doc(), threaded=True)
    events = runner.subscribe_events()
    runner.start()
    deadline = time.monotonic() + 2.0
    while runner.marking()["c"] != 1 and time.monotonic() < deadline:
        time.sleep(0.005)
    runner.stop()  # parked in quiescence; must wake and stop
    kinds = [e.kind for e in events.drain()]
    assert kinds[-1] is EventKind.EXECUTION_STOPPED


def test_mark_before_start_applies_immediately():
    runner = Runner.load(control_doc(), HookRegistry({"on_act": lambda *a: None}),
                         threaded=False)
    runner.mark_place("go", 2)
    assert runner.marking()["go"] == 2
    runner.clear_place("go")
    assert runner.marking()["go"] == 0


def test_firing_tap_runs_after_every_firing():
    taps = []
    runner = Runner.load(cycle_doc(), threaded=False,
                         firing_tap=lambda e: taps.append(e.transition))
    runner.start()
    runner.pump(max_steps=4)
    assert taps == ["t1", "t2", "t1", "t2"]


def test_external_input_never_lost_under_concurrent_marks():
    """Every mark lands in the marking; the sink counts all consumed tokens."""
    net = PetriNet(
        [Place("go", PlaceKind.EXTERNAL_INPUT), Place("sink", PlaceKind.EXTERNAL_OUTPUT)],
        [Transition("t")],
        [Arc("go", "t"), Arc("t", "sink")],
    )
    doc = PnmlDocument.single(net, Marking({"go": 0, "sink": 0}))
    runner = Runner.load(doc, threaded=True)
    runner.start()
    per_thread, threads = 40, 4

    def hammer():
        for _ in range(per_thread):
            runner.mark_place("go", 1)

    workers = [threading.Thread(target=hammer) for _ in range(threads)]
    for w in workers:
        w.start()
    for w in workers:
        w.join()
    deadline = time.monotonic() + 5.0
    expected = per_thread * threads
    while time.monotonic() < deadline:
        m = runner.marking()
        if m["sink"] == expected and m["go"] == 0:
            break
        time.sleep(0.01)
    runner.stop()
    m = runner.marking()
    assert m["sink"] == expected and m["go"] == 0
