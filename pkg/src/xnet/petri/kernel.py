"""Dense net encoding and firing-kernel selection.

The compiled kernel (``_accel``, built from Cython) is used when
importable; setting ``XNET_PURE_KERNEL=1`` forces the pure-Python twin.
Both expose the same functions, so everything above this module is
kernel-agnostic.
"""

from __future__ import annotations

import os
import weakref
from array import array

from .model import Marking, PetriNet, ValidationError

if os.environ.get("XNET_PURE_KERNEL"):
    from . import _kernel_pure as KERNEL
else:
    try:
        from . import _accel as KERNEL  # type: ignore[no-redef]
    except ImportError:
        from . import _kernel_pure as KERNEL  # type: ignore[no-redef]

KERNEL_NAME: str = KERNEL.NAME


class DenseNet:
    """Row-major input/output weight matrices plus id<->index maps.

    Place and transition ids are index-sorted lexicographically, so the
    lowest enabled kernel index is also the lexicographically smallest
    transition id (the engine's tie-break rule).
    """

    __slots__ = ("net", "place_ids", "transition_ids", "place_index", "transition_index",
                 "n_places", "n_transitions", "w_in", "w_out", "__weakref__")

    def __init__(self, net: PetriNet):
        self.net = net
        self.place_ids = net.place_ids
        self.transition_ids = net.transition_ids
        self.place_index = {p: i for i, p in enumerate(self.place_ids)}
        self.transition_index = {t: i for i, t in enumerate(self.transition_ids)}
        self.n_places = len(self.place_ids)
        self.n_transitions = len(self.transition_ids)
        w_in = array("i", [0]) * (self.n_transitions * self.n_places)
        w_out = array("i", [0]) * (self.n_transitions * self.n_places)
        for arc in net.arcs:
            if arc.source in self.place_index:
                t = self.transition_index[arc.target]
                w_in[t * self.n_places + self.place_index[arc.source]] = arc.weight
            else:
                t = self.transition_index[arc.source]
                w_out[t * self.n_places + self.place_index[arc.target]] = arc.weight
        self.w_in = w_in
        self.w_out = w_out

    def vec(self, marking: Marking) -> array:
        try:
            return array("i", (marking[p] for p in self.place_ids))
        except KeyError as exc:
            raise ValidationError(f"marking is missing place {exc.args[0]!r}") from None

    def marking(self, vec) -> Marking:
        return Marking(dict(zip(self.place_ids, vec)))


_dense_cache: "weakref.WeakKeyDictionary[PetriNet, DenseNet]" = weakref.WeakKeyDictionary()


def dense_of(net: PetriNet) -> DenseNet:
    dense = _dense_cache.get(net)
    if dense is None:
        dense = DenseNet(net)
        _dense_cache[net] = dense
    return dense
