import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracle/netgen importable

from xnet.petri import Arc, Marking, PetriNet, Place, Transition


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def random_net(rng, max_places=8, max_transitions=8, max_tokens=4, max_weight=2):
    """Small random net plus an initial marking (bounded total tokens)."""
    n_places = rng.randint(1, max_places)
    n_transitions = rng.randint(1, max_transitions)
    places = [Place(f"p{i}") for i in range(n_places)]
    transitions = [Transition(f"t{i}") for i in range(n_transitions)]
    arcs = []
    used = set()
    for _ in range(rng.randint(1, 2 * (n_places + n_transitions))):
        p = rng.randrange(n_places)
        t = rng.randrange(n_transitions)
        if rng.random() < 0.5:
            key = (f"p{p}", f"t{t}")
        else:
            key = (f"t{t}", f"p{p}")
        if key in used:
            continue
        used.add(key)
        arcs.append(Arc(key[0], key[1], rng.randint(1, max_weight)))
    net = PetriNet(places, transitions, arcs)
    counts = {p.id: 0 for p in places}
    for _ in range(rng.randint(0, max_tokens)):
        counts[f"p{rng.randrange(n_places)}"] += 1
    return net, Marking(counts)
