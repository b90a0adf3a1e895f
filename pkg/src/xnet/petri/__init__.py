"""Extended Petri net core: model, firing semantics, composition."""

from .compose import merge_nets
from .kernel import KERNEL_NAME, DenseNet, dense_of
from .model import (
    Arc,
    CompositionError,
    Marking,
    NotEnabledError,
    PetriNet,
    PetriNetError,
    Place,
    PlaceKind,
    Transition,
    TransitionKind,
    UnknownNodeError,
    ValidationError,
)
from .semantics import enabled_set, fire, is_enabled

__all__ = [
    "Arc",
    "CompositionError",
    "DenseNet",
    "KERNEL_NAME",
    "Marking",
    "NotEnabledError",
    "PetriNet",
    "PetriNetError",
    "Place",
    "PlaceKind",
    "Transition",
    "TransitionKind",
    "UnknownNodeError",
    "ValidationError",
    "dense_of",
    "enabled_set",
    "fire",
    "is_enabled",
    "merge_nets",
]
