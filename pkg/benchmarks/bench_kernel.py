"""Compiled vs pure-Python node kernel.

Two workloads: raw compose/evaluate on random dyadic maps, run against both
kernel modules in-process, and a derived-series sample of Thompson's F run
in a subprocess per backend (the backend is fixed at import time).

    python benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import os
import random
import subprocess
import sys
import time

from plgroups import kernel
from plgroups.rat import Rat

SAMPLE = (
    "import time; from plgroups import kernel, f_generators; "
    "from plgroups.groups import derived_sample; "
    "t = time.perf_counter(); s = derived_sample(f_generators(2), 2, 4, commutator_cap=20000); "
    "print(kernel.NAME, len(s), time.perf_counter() - t)"
)


def random_nodes(rng, k=10, den=64):
    xs = sorted(Rat(p, den) for p in rng.sample(range(1, den), k))
    ys = sorted(Rat(p, den) for p in rng.sample(range(1, den), k))
    return [Rat(0)] + xs + [Rat(1)], [Rat(0)] + ys + [Rat(1)]


def raw(mod, pairs, points):
    maps = [(mod.Nodes.from_sequences(*a), mod.Nodes.from_sequences(*b)) for a, b in pairs]
    t = time.perf_counter()
    for f, g in maps:
        h = f.compose(g).compose(f.inverse())
        for x in points:
            h.evaluate(x)
    return time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--pairs", type=int, default=2000)
    args = ap.parse_args()

    rng = random.Random(0)
    pairs = [(random_nodes(rng), random_nodes(rng)) for _ in range(args.pairs)]
    points = [Rat(rng.randint(0, 1024), 1024) for _ in range(20)]
    backends = kernel.available_backends()
    print(f"raw kernel: {args.pairs} compose chains, 20 evaluations each (best of {args.repeat})")
    best = {}
    for name, mod in backends.items():
        best[name] = min(raw(mod, pairs, points) for _ in range(args.repeat))
        print(f"  {name:9s} {best[name]:8.3f}s")
    if len(best) == 2:
        print(f"  speedup   {best['python'] / best['compiled']:8.2f}x")

    print("derived sample of F (level 2, L=4, 20k pairs)")
    times = {}
    for name in backends:
        env = dict(os.environ, PLGROUPS_KERNEL=name)
        out = subprocess.run([sys.executable, "-c", SAMPLE], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        times[name] = float(out[2])
        print(f"  {name:9s} {times[name]:8.3f}s  ({out[1]} maps)")
    if len(times) == 2:
        print(f"  speedup   {times['python'] / times['compiled']:8.2f}x")


if __name__ == "__main__":
    main()
