"""Composition of nets via merge places.

Places that share a merge-group label (across or within the input nets)
collapse into a single place whose id is the group label. All other ids
must be disjoint across nets. The collapsed place carries the union of
the member places' arcs.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable

from .model import Arc, CompositionError, PetriNet, Place, PlaceKind


def _merged_kind(group: str, members: list[Place]) -> PlaceKind:
    external = {p.kind for p in members if p.kind is not PlaceKind.MERGE}
    if len(external) > 1:
        kinds = sorted(k.value for k in external)
        raise CompositionError(f"merge group {group!r} mixes external kinds: {kinds}")
    return external.pop() if external else PlaceKind.PLAIN


def merge_nets(nets: Iterable[PetriNet]) -> PetriNet:
    nets = list(nets)
    if not nets:
        raise CompositionError("nothing to merge")

    groups: dict[str, list[Place]] = defaultdict(list)
    plain_places: list[Place] = []
    transitions = []
    seen_ids: set[str] = set()

    for net in nets:
        for p in net.places:
            if p.merge_group is not None:
                groups[p.merge_group].append(p)
            else:
                if p.id in seen_ids:
                    raise CompositionError(f"id collision outside merge groups: {p.id!r}")
                seen_ids.add(p.id)
                plain_places.append(p)
        for t in net.transitions:
            if t.id in seen_ids:
                raise CompositionError(f"id collision outside merge groups: {t.id!r}")
            seen_ids.add(t.id)
            transitions.append(t)

    merged_places = []
    for group, members in groups.items():
        if group in seen_ids:
            raise CompositionError(f"merge group {group!r} collides with a non-merge id")
        kind = _merged_kind(group, members)
        merged_places.append(Place(group, kind))

    # Rewrite arcs over the merged ids; identical duplicates collapse,
    # same-endpoint arcs with different weights cannot be reconciled.
    arc_weights: dict[tuple[str, str], int] = {}
    for net in nets:
        rename = {p.id: p.merge_group for p in net.places if p.merge_group is not None}
        for a in net.arcs:
            key = (rename.get(a.source, a.source), rename.get(a.target, a.target))
            if key in arc_weights and arc_weights[key] != a.weight:
                raise CompositionError(
                    f"conflicting weights for merged arc {key[0]!r}->{key[1]!r}"
                )
            arc_weights[key] = a.weight

    arcs = [Arc(s, t, w) for (s, t), w in arc_weights.items()]
    return PetriNet(plain_places + merged_places, transitions, arcs)
