"""Time every kernel in its numba and pure-numpy flavour.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--quick]

Numba compilation is triggered once before timing. Output is one row per
(kernel, size) with the best-of-``repeat`` wall time of each flavour.
"""
import argparse
import timeit

import numpy as np

from areal_mahler import kernels


def cases(rng, quick: bool):
    degrees = (10, 50) if quick else (10, 50, 200)
    for n in degrees:
        a = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        z0 = kernels.newton_polygon_guesses(a)
        yield "aberth", f"deg {n}", (a, z0, 500)
    for rows in ((64,) if quick else (64, 512)):
        A = rng.normal(size=(rows, 9)) + 1j * rng.normal(size=(rows, 9))
        yield "batch_aberth", f"{rows} x deg 8", (A, 500)
    for n in ((1_000,) if quick else (1_000, 100_000)):
        a = rng.normal(size=30) + 1j * rng.normal(size=30)
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        yield "horner", f"deg 29 at {n} pts", (a, z)
    for n in ((100,) if quick else (100, 1000)):
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        yield "pair_energy", f"{n} roots", (z, 10.0)
    for n in ((10_000,) if quick else (10_000, 200_000)):
        exps = rng.integers(0, 4, size=(10, 2))
        coefs = rng.normal(size=10) + 1j * rng.normal(size=10)
        pts = np.ascontiguousarray(rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2)))
        yield "mv_eval", f"{n} pts", (exps, coefs, pts)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="small sizes only")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    print(f"{'kernel':<14}{'case':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>9}")
    for name, label, inputs in cases(rng, args.quick):
        fast, slow = kernels.IMPLEMENTATIONS[name]
        fast(*inputs)  # compile
        t_fast = min(timeit.repeat(lambda: fast(*inputs), number=1, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: slow(*inputs), number=1, repeat=args.repeat))
        print(f"{name:<14}{label:<22}{1e3 * t_fast:>12.3f}{1e3 * t_slow:>12.3f}{t_slow / t_fast:>8.1f}x")


if __name__ == "__main__":
    main()
