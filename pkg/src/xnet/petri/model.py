"""Data model for extended Petri nets.

Nets are immutable values: places, transitions and weighted arcs, with
three extension points over plain place/transition nets:

* place kinds: external-input (an outside system may add tokens),
  external-output (an outside system may watch the token count), and
  merge (a composition stub collapsed by ``merge_nets``);
* transition kinds: timed (fires only after a tick delay) and external
  (runs a registered callback when it fires);
* markings are plain token-count vectors, kept separate from the net.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum


class PetriNetError(Exception):
    """Base class for all net-model errors."""


class ValidationError(PetriNetError):
    """A net or marking violates a structural invariant."""


class UnknownNodeError(PetriNetError):
    """Reference to a place or transition id that is not in the net."""


class NotEnabledError(PetriNetError):
    """Attempt to fire a transition whose preconditions are not met."""


class CompositionError(PetriNetError):
    """Nets cannot be merged (id collision or conflicting merge kinds)."""


class PlaceKind(Enum):
    PLAIN = "plain"
    EXTERNAL_INPUT = "external-input"
    EXTERNAL_OUTPUT = "external-output"
    MERGE = "merge"


class TransitionKind(Enum):
    IMMEDIATE = "immediate"
    TIMED = "timed"
    EXTERNAL = "external"


# Merge groups may sit on external places: the group member then dictates
# the kind the collapsed place keeps after composition.
_MERGEABLE = (PlaceKind.MERGE, PlaceKind.EXTERNAL_INPUT, PlaceKind.EXTERNAL_OUTPUT)


@dataclass(frozen=True)
class Place:
    id: str
    kind: PlaceKind = PlaceKind.PLAIN
    merge_group: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("place id must be non-empty")
        if self.kind is PlaceKind.MERGE and not self.merge_group:
            raise ValidationError(f"merge place {self.id!r} needs a merge_group")
        if self.merge_group is not None and self.kind not in _MERGEABLE:
            raise ValidationError(
                f"place {self.id!r}: merge_group is only valid on merge or external places"
            )


@dataclass(frozen=True)
class Transition:
    id: str
    kind: TransitionKind = TransitionKind.IMMEDIATE
    delay: int | None = None
    hook_name: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("transition id must be non-empty")
        if self.kind is TransitionKind.TIMED:
            if self.delay is None or self.delay < 0:
                raise ValidationError(f"timed transition {self.id!r} needs delay >= 0")
        elif self.delay is not None:
            raise ValidationError(f"transition {self.id!r}: delay is only valid on timed kind")
        if self.kind is TransitionKind.EXTERNAL:
            if not self.hook_name:
                raise ValidationError(f"external transition {self.id!r} needs a hook_name")
        elif self.hook_name is not None:
            raise ValidationError(f"transition {self.id!r}: hook_name is only valid on external kind")


@dataclass(frozen=True)
class Arc:
    source: str
    target: str
    weight: int = 1

    def __post_init__(self):
        if self.weight < 1:
            raise ValidationError(f"arc {self.source!r}->{self.target!r}: weight must be >= 1")


@dataclass(frozen=True)
class PetriNet:
    """Immutable net structure; element tuples are kept id-sorted so that
    structural equality is independent of construction order."""

    places: tuple[Place, ...]
    transitions: tuple[Transition, ...]
    arcs: tuple[Arc, ...]

    def __init__(self, places: Iterable[Place], transitions: Iterable[Transition], arcs: Iterable[Arc]):
        object.__setattr__(self, "places", tuple(sorted(places, key=lambda p: p.id)))
        object.__setattr__(self, "transitions", tuple(sorted(transitions, key=lambda t: t.id)))
        object.__setattr__(self, "arcs", tuple(sorted(arcs, key=lambda a: (a.source, a.target))))
        self._validate()

    def _validate(self):
        place_ids = {p.id for p in self.places}
        if len(place_ids) != len(self.places):
            raise ValidationError("duplicate place ids")
        transition_ids = {t.id for t in self.transitions}
        if len(transition_ids) != len(self.transitions):
            raise ValidationError("duplicate transition ids")
        if place_ids & transition_ids:
            raise ValidationError(f"ids shared by places and transitions: {sorted(place_ids & transition_ids)}")
        seen = set()
        for arc in self.arcs:
            if (arc.source, arc.target) in seen:
                raise ValidationError(f"duplicate arc {arc.source!r}->{arc.target!r}")
            seen.add((arc.source, arc.target))
            src_is_place = arc.source in place_ids
            tgt_is_place = arc.target in place_ids
            if arc.source not in place_ids | transition_ids:
                raise ValidationError(f"arc source {arc.source!r} is not in the net")
            if arc.target not in place_ids | transition_ids:
                raise ValidationError(f"arc target {arc.target!r} is not in the net")
            if src_is_place == tgt_is_place:
                raise ValidationError(
                    f"arc {arc.source!r}->{arc.target!r} must connect a place and a transition"
                )

    def place(self, place_id: str) -> Place:
        for p in self.places:
            if p.id == place_id:
                return p
        raise UnknownNodeError(f"unknown place {place_id!r}")

    def transition(self, transition_id: str) -> Transition:
        for t in self.transitions:
            if t.id == transition_id:
                return t
        raise UnknownNodeError(f"unknown transition {transition_id!r}")

    @property
    def place_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.places)

    @property
    def transition_ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.transitions)

    def inputs_of(self, transition_id: str) -> dict[str, int]:
        """Input places of a transition with arc weights."""
        self.transition(transition_id)
        return {a.source: a.weight for a in self.arcs if a.target == transition_id}

    def outputs_of(self, transition_id: str) -> dict[str, int]:
        self.transition(transition_id)
        return {a.target: a.weight for a in self.arcs if a.source == transition_id}


class Marking(Mapping):
    """Token counts per place; an immutable, hashable mapping."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, counts: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        counts = dict(counts)
        for place_id, n in counts.items():
            if not isinstance(n, int) or n < 0:
                raise ValidationError(f"marking count for {place_id!r} must be a non-negative int")
        self._counts = counts
        self._hash = None

    def __getitem__(self, place_id: str) -> int:
        return self._counts[place_id]

    def __iter__(self):
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other) -> bool:
        if isinstance(other, Marking):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._counts.items())))
        return self._hash

    def __repr__(self) -> str:
        inside = ", ".join(f"{k}: {v}" for k, v in sorted(self._counts.items()))
        return f"Marking({{{inside}}})"

    def updated(self, deltas: Mapping[str, int]) -> "Marking":
        """New marking with counts shifted by the given deltas."""
        counts = dict(self._counts)
        for place_id, d in deltas.items():
            counts[place_id] = counts.get(place_id, 0) + d
        return Marking(counts)

    @staticmethod
    def zero(net: PetriNet) -> "Marking":
        return Marking({p.id: 0 for p in net.places})

    @staticmethod
    def for_net(net: PetriNet, counts: Mapping[str, int]) -> "Marking":
        """Marking covering every place of the net; unknown ids rejected."""
        known = set(net.place_ids)
        extra = set(counts) - known
        if extra:
            raise ValidationError(f"marking names places not in the net: {sorted(extra)}")
        full = {p: 0 for p in known}
        full.update(counts)
        return Marking(full)

    def check_covers(self, net: PetriNet):
        missing = set(net.place_ids) - set(self._counts)
        if missing:
            raise ValidationError(f"marking is missing places: {sorted(missing)}")
