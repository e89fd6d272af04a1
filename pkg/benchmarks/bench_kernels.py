"""Timing comparison of the compiled and pure-python kernels.

    python3 benchmarks/bench_kernels.py [--t 200000] [--m 5] [--repeats 5]

Both backends consume the RNG stream identically, so while timing we also
assert the outputs match bit for bit.  Reported times are best-of-N wall
clock; the pure kernels are vectorized numpy, so the gap is honest work,
not interpreter overhead.
"""

import argparse
import time

import numpy as np

from pamp import _kernels_py as kpy
from pamp.dynamics import init_colours
from pamp.pa_graph import generate_pa
from pamp.rng import make_generator

try:
    from pamp import _kernels_cy as kcy
except ImportError:  # pragma: no cover - build without the extension
    kcy = None


def best_of(fn, repeats):
    times = []
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench(label, make_args, call, repeats):
    t_py, out_py = best_of(lambda: call(kpy, *make_args()), repeats)
    row = f"{label:<28} python {t_py * 1e3:9.1f} ms"
    if kcy is not None:
        t_cy, out_cy = best_of(lambda: call(kcy, *make_args()), repeats)
        assert np.array_equal(out_py, out_cy), f"{label}: backends disagree"
        row += f"   compiled {t_cy * 1e3:9.1f} ms   speedup {t_py / t_cy:5.1f}x"
    print(row)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t", type=int, default=200_000)
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    n = args.t * args.m
    print(f"t={args.t} m={args.m} k={args.k} ({n} attachment slots), "
          f"best of {args.repeats}")

    bench("pa1_targets (growth)",
          lambda: (n, 0.0, make_generator(1)),
          lambda mod, *a: mod.pa1_targets(*a), args.repeats)
    bench("pa1_targets (delta<0 scan)",
          lambda: (n // 100, -0.4, make_generator(1)),
          lambda mod, *a: mod.pa1_targets(*a), args.repeats)

    g = generate_pa(args.t, args.m, 0.0, seed=7)
    indptr, endpoints, _ = g.csr()
    colours = init_colours(g.t, 0.3, seed=3).colours
    bench("mpk_step (one round)",
          lambda: (indptr, endpoints, colours.copy(), args.k,
                   make_generator(2)),
          lambda mod, *a: mod.mpk_step(*a), args.repeats)
    bench("voter_step (one round)",
          lambda: (indptr, endpoints, colours.copy(), make_generator(2)),
          lambda mod, *a: mod.voter_step(*a), args.repeats)


if __name__ == "__main__":
    main()
