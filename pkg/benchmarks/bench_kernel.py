"""Benchmark: compiled vs pure-Python firing kernels.

Two workloads over the same randomly generated nets:

* ``saturate``: fire the lowest enabled transition until quiescence (the
  scheduling loop's inner operation, batched in-kernel);
* ``step``: enabled-set scan plus one fire per call from Python (the
  runner's per-step pattern).

Usage: python benchmarks/bench_kernel.py [--nets 200] [--steps 400]
"""

import argparse
import random
import sys
import time
from array import array
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from xnet.petri import _kernel_pure
from xnet.petri.kernel import dense_of
from xnet.petri.model import Arc, Marking, PetriNet, Place, Transition

try:
    from xnet.petri import _accel
except ImportError:
    _accel = None


def random_cyclic_net(rng, n_places=12, n_transitions=12):
    """Strongly cyclic nets so saturation runs long enough to measure."""
    places = [Place(f"p{i}") for i in range(n_places)]
    transitions = [Transition(f"t{i}") for i in range(n_transitions)]
    arcs = {}
    for i in range(n_transitions):
        src = rng.randrange(n_places)
        dst = rng.randrange(n_places)
        arcs[(f"p{src}", f"t{i}")] = Arc(f"p{src}", f"t{i}")
        arcs[(f"t{i}", f"p{dst}")] = Arc(f"t{i}", f"p{dst}")
        if rng.random() < 0.5:
            extra = rng.randrange(n_places)
            arcs.setdefault((f"t{i}", f"p{extra}"), Arc(f"t{i}", f"p{extra}"))
    net = PetriNet(places, transitions, list(arcs.values()))
    marking = Marking({p.id: rng.randint(0, 1) for p in places})
    return net, marking


def bench_saturate(kernel, dense_nets, steps):
    fired = 0
    start = time.perf_counter()
    for dense, vec in dense_nets:
        work = array("i", vec)
        fired += len(kernel.saturate(dense.w_in, dense.w_out, work,
                                     dense.n_transitions, dense.n_places, steps))
    return fired, time.perf_counter() - start


def bench_step(kernel, dense_nets, steps):
    fired = 0
    start = time.perf_counter()
    for dense, vec in dense_nets:
        work = array("i", vec)
        for _ in range(steps):
            enabled = kernel.enabled_indices(dense.w_in, work,
                                             dense.n_transitions, dense.n_places)
            if not enabled:
                break
            kernel.fire(dense.w_in, dense.w_out, work, enabled[0], dense.n_places)
            fired += 1
    return fired, time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nets", type=int, default=200)
    parser.add_argument("--steps", type=int, default=400)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(7)
    dense_nets = []
    for _ in range(args.nets):
        net, marking = random_cyclic_net(rng)
        dense = dense_of(net)
        dense_nets.append((dense, dense.vec(marking)))

    kernels = [("pure", _kernel_pure)]
    if _accel is not None:
        kernels.append(("cython", _accel))
    else:
        print("note: compiled kernel not built; benchmarking pure only")

    results = {}
    for name, kernel in kernels:
        for label, bench in (("saturate", bench_saturate), ("step", bench_step)):
            timings = []
            fired = 0
            for _ in range(args.repeats):
                fired, elapsed = bench(kernel, dense_nets, args.steps)
                timings.append(elapsed)
            best = min(timings)
            rate = fired / best if best else float("inf")
            results[(name, label)] = (fired, best, rate)
            print(f"{name:>7} {label:>9}: {fired:>8} firings in {best:.4f}s "
                  f"(best of {args.repeats}) -> {rate / 1e6:.2f} M firings/s")

    if _accel is not None:
        for label in ("saturate", "step"):
            speedup = results[("pure", label)][1] / results[("cython", label)][1]
            print(f"speedup ({label}): {speedup:.1f}x")


if __name__ == "__main__":
    main()
