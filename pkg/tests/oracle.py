"""Independent brute-force oracle for firing semantics and reachability.

Deliberately naive and separate from the engine: dict-based markings,
no shared code with the kernel path. Used to cross-check the engine on
small nets and to exhaustively explore the action nets under external
input schedules.
"""

from __future__ import annotations

from collections import deque


def net_tables(net):
    """(inputs, outputs) per transition id, read straight off the arcs."""
    place_ids = {p.id for p in net.places}
    inputs = {t.id: {} for t in net.transitions}
    outputs = {t.id: {} for t in net.transitions}
    for arc in net.arcs:
        if arc.source in place_ids:
            inputs[arc.target][arc.source] = arc.weight
        else:
            outputs[arc.source][arc.target] = arc.weight
    return inputs, outputs


def naive_enabled(inputs, marking, tid):
    return all(marking.get(p, 0) >= w for p, w in inputs[tid].items())


def naive_fire(inputs, outputs, marking, tid):
    after = dict(marking)
    for p, w in inputs[tid].items():
        after[p] -= w
    for p, w in outputs[tid].items():
        after[p] = after.get(p, 0) + w
    return after


def naive_enabled_set(inputs, marking):
    return sorted(t for t in inputs if naive_enabled(inputs, marking, t))


def _freeze(marking):
    return tuple(sorted(marking.items()))


def reachability_set(net, initial_marking, max_depth=None, limit=500_000):
    """Markings reachable by any firing sequence (breadth-first).

    ``max_depth`` bounds the explored sequence length; nets with source
    transitions are unbounded, so callers compare engine walks of length
    L against the depth-L set.
    """
    inputs, outputs = net_tables(net)
    start = dict(initial_marking)
    seen = {_freeze(start)}
    frontier = deque([(start, 0)])
    while frontier:
        marking, depth = frontier.popleft()
        if max_depth is not None and depth >= max_depth:
            continue
        for tid in inputs:
            if naive_enabled(inputs, marking, tid):
                after = naive_fire(inputs, outputs, marking, tid)
                key = _freeze(after)
                if key not in seen:
                    if len(seen) >= limit:
                        raise RuntimeError("reachability set exceeds oracle limit")
                    seen.add(key)
                    frontier.append((after, depth + 1))
    return seen


def explore_with_inputs(net, initial_marking, input_places, max_injections,
                        once_only=frozenset(), limit=500_000):
    """All markings reachable under firings interleaved with external input.

    Injection models the system's writers: setting an input place to one
    token, idempotently (the solver drains stale tokens before marking,
    and the arrival signal re-derives from world state, so input places
    never accumulate). Places in ``once_only`` may be injected at most
    once per schedule. Explores every interleaving of at most
    ``max_injections`` injections with engine firings.
    """
    inputs, outputs = net_tables(net)
    start = dict(initial_marking)
    once_only = frozenset(once_only)
    seen_states = set()
    markings = set()
    frontier = deque()

    def push(marking, injections, used_once):
        key = (_freeze(marking), injections, used_once)
        if key not in seen_states:
            if len(seen_states) >= limit:
                raise RuntimeError("input-schedule exploration exceeds oracle limit")
            seen_states.add(key)
            markings.add(_freeze(marking))
            frontier.append((marking, injections, used_once))

    push(start, 0, frozenset())
    while frontier:
        marking, injections, used_once = frontier.popleft()
        for tid in inputs:
            if naive_enabled(inputs, marking, tid):
                push(naive_fire(inputs, outputs, marking, tid), injections, used_once)
        if injections < max_injections:
            for place in input_places:
                if place in once_only and place in used_once:
                    continue
                after = dict(marking)
                after[place] = 1
                used = used_once | {place} if place in once_only else used_once
                push(after, injections + 1, used)
    return markings
