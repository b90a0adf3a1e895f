"""Merge-place composition."""

import pytest

from xnet.petri import (
    Arc,
    CompositionError,
    PetriNet,
    Place,
    PlaceKind,
    Transition,
    merge_nets,
)


def test_two_nets_join_through_shared_group():
    net1 = PetriNet(
        [Place("a"), Place("h1", PlaceKind.MERGE, merge_group="handoff")],
        [Transition("t1")],
        [Arc("a", "t1"), Arc("t1", "h1")],
    )
    net2 = PetriNet(
        [Place("b"), Place("h2", PlaceKind.MERGE, merge_group="handoff")],
        [Transition("t2")],
        [Arc("h2", "t2"), Arc("t2", "b")],
    )
    merged = merge_nets([net1, net2])
    assert {p.id for p in merged.places} == {"a", "b", "handoff"}
    assert merged.place("handoff").kind is PlaceKind.PLAIN
    assert {(a.source, a.target) for a in merged.arcs} == {
        ("a", "t1"), ("t1", "handoff"), ("handoff", "t2"), ("t2", "b")}


def test_single_net_without_merge_places_is_identity():
    net = PetriNet([Place("p"), Place("q")], [Transition("t")],
                   [Arc("p", "t"), Arc("t", "q")])
    assert merge_nets([net]) == net


def test_merge_with_renamed_copy_attaches_both_arc_sets():
    def variant(suffix):
        return PetriNet(
            [Place(f"p{suffix}"), Place(f"m{suffix}", PlaceKind.MERGE, merge_group="g")],
            [Transition(f"t{suffix}")],
            [Arc(f"p{suffix}", f"t{suffix}"), Arc(f"t{suffix}", f"m{suffix}")],
        )

    merged = merge_nets([variant("1"), variant("2")])
    assert len(merged.arcs) == 4  # sum of member arc counts
    into_g = [a for a in merged.arcs if a.target == "g"]
    assert {a.source for a in into_g} == {"t1", "t2"}


def test_id_collision_outside_merge_groups_rejected():
    net1 = PetriNet([Place("p")], [Transition("t")], [Arc("p", "t")])
    net2 = PetriNet([Place("p")], [Transition("u")], [Arc("p", "u")])
    with pytest.raises(CompositionError):
        merge_nets([net1, net2])


def test_external_member_kind_wins():
    net1 = PetriNet([Place("m1", PlaceKind.MERGE, merge_group="g")], [], [])
    net2 = PetriNet([Place("m2", PlaceKind.EXTERNAL_INPUT, merge_group="g")], [], [])
    merged = merge_nets([net1, net2])
    assert merged.place("g").kind is PlaceKind.EXTERNAL_INPUT


def test_conflicting_external_kinds_rejected():
    net1 = PetriNet([Place("m1", PlaceKind.EXTERNAL_INPUT, merge_group="g")], [], [])
    net2 = PetriNet([Place("m2", PlaceKind.EXTERNAL_OUTPUT, merge_group="g")], [], [])
    with pytest.raises(CompositionError):
        merge_nets([net1, net2])


def test_group_label_colliding_with_plain_id_rejected():
    net1 = PetriNet([Place("m1", PlaceKind.MERGE, merge_group="x")], [], [])
    net2 = PetriNet([Place("x")], [], [])
    with pytest.raises(CompositionError):
        merge_nets([net1, net2])


def test_merged_net_executes_across_the_seam():
    """A token produced in one component is consumed in the other."""
    from xnet.petri import Marking, enabled_set, fire

    producer = PetriNet(
        [Place("src"), Place("out1", PlaceKind.MERGE, merge_group="link")],
        [Transition("produce")],
        [Arc("src", "produce"), Arc("produce", "out1")],
    )
    consumer = PetriNet(
        [Place("sink"), Place("in2", PlaceKind.MERGE, merge_group="link")],
        [Transition("consume")],
        [Arc("in2", "consume"), Arc("consume", "sink")],
    )
    net = merge_nets([producer, consumer])
    m = Marking.for_net(net, {"src": 1})
    m = fire(net, m, "produce")
    assert m["link"] == 1
    assert enabled_set(net, m) == ["consume"]
    m = fire(net, m, "consume")
    assert m["sink"] == 1
