"""Firing semantics: enabledness, firing with value semantics, enabled set."""

from __future__ import annotations

from .kernel import KERNEL, dense_of
from .model import Marking, NotEnabledError, PetriNet, UnknownNodeError


def is_enabled(net: PetriNet, marking: Marking, transition_id: str) -> bool:
    """True iff every input place holds at least the arc weight."""
    dense = dense_of(net)
    try:
        t = dense.transition_index[transition_id]
    except KeyError:
        raise UnknownNodeError(f"unknown transition {transition_id!r}") from None
    return bool(KERNEL.is_enabled(dense.w_in, dense.vec(marking), t, dense.n_places))


def fire(net: PetriNet, marking: Marking, transition_id: str) -> Marking:
    """New marking after firing; the input marking is left untouched.

    Firing a disabled transition is a contract violation, never a no-op.
    """
    dense = dense_of(net)
    try:
        t = dense.transition_index[transition_id]
    except KeyError:
        raise UnknownNodeError(f"unknown transition {transition_id!r}") from None
    vec = dense.vec(marking)
    if not KERNEL.is_enabled(dense.w_in, vec, t, dense.n_places):
        raise NotEnabledError(f"transition {transition_id!r} is not enabled")
    KERNEL.fire(dense.w_in, dense.w_out, vec, t, dense.n_places)
    return dense.marking(vec)


def enabled_set(net: PetriNet, marking: Marking) -> list[str]:
    """All enabled transitions, sorted lexicographically by id."""
    dense = dense_of(net)
    vec = dense.vec(marking)
    idx = KERNEL.enabled_indices(dense.w_in, vec, dense.n_transitions, dense.n_places)
    return [dense.transition_ids[i] for i in idx]
