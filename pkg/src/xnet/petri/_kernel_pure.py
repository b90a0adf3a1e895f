"""Pure-Python firing kernels over the dense arc-weight encoding.

Mirrors the compiled module in ``_accel.pyx``; either one is picked at
import time by ``kernel``. All functions treat ``w_in``/``w_out`` as
row-major ``n_transitions x n_places`` weight matrices and ``m`` as a
flat token-count vector indexed like the places.
"""

from __future__ import annotations

NAME = "pure"


def is_enabled(w_in, m, t, n_places):
    base = t * n_places
    for p in range(n_places):
        w = w_in[base + p]
        if w and m[p] < w:
            return False
    return True


def enabled_indices(w_in, m, n_transitions, n_places):
    out = []
    for t in range(n_transitions):
        if is_enabled(w_in, m, t, n_places):
            out.append(t)
    return out


def first_enabled(w_in, m, n_transitions, n_places):
    for t in range(n_transitions):
        if is_enabled(w_in, m, t, n_places):
            return t
    return -1


def fire(w_in, w_out, m, t, n_places):
    """Fire transition ``t`` in place: consume inputs, produce outputs.

    Callers must have checked enabledness; counts would go negative here.
    """
    base = t * n_places
    for p in range(n_places):
        m[p] += w_out[base + p] - w_in[base + p]


def saturate(w_in, w_out, m, n_transitions, n_places, max_steps):
    """Repeatedly fire the lowest-index enabled transition.

    Stops at quiescence or after ``max_steps`` firings; returns the fired
    index sequence. Timed/external semantics live above the kernel.
    """
    fired = []
    for _ in range(max_steps):
        t = first_enabled(w_in, m, n_transitions, n_places)
        if t < 0:
            break
        fire(w_in, w_out, m, t, n_places)
        fired.append(t)
    return fired
