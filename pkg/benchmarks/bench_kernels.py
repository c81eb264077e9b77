"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the two hot paths (group-element census, coset canonicalization with
fix counting) on both backends and prints timings plus the speedup.

    python benchmarks/bench_kernels.py [--big]

--big enumerates the order-362880 block group on 18 points instead of S_8.
Results must be identical across backends; the script asserts that.
"""

import argparse
import time

import numpy as np

from hsplab import _kernels
from hsplab.coset import coset_action
from hsplab.perm import PermGroup, class_profile, parse_cycles


def time_backend(name, fn):
    _kernels.force_backend(name)
    fn()  # warm (JIT compile on the numba side)
    t0 = time.perf_counter()
    result = fn()
    return time.perf_counter() - t0, result


def bench(label, fn):
    t_np, r_np = time_backend("numpy", fn)
    if _kernels._HAVE_NUMBA:
        t_nb, r_nb = time_backend("numba", fn)
        assert r_np == r_nb, f"{label}: backends disagree"
        print(f"{label:<42} numpy {t_np:8.3f} s   numba {t_nb:8.3f} s   speedup {t_np / t_nb:6.1f}x")
    else:
        print(f"{label:<42} numpy {t_np:8.3f} s   (numba unavailable)")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--big", action="store_true", help="use the order-362880 block group")
    args = parser.parse_args()

    if args.big:
        census_group = PermGroup.from_cycles(
            ["(1 3)(2 4)", "(1 3 5 7 9 11 13 15 17)(2 4 6 8 10 12 14 16 18)"], 18
        )
        census_label = "census: block group 9x2 (order 362880)"
    else:
        census_group = PermGroup.symmetric(8)
        census_label = "census: S_8 (order 40320)"

    def census():
        return tuple(sorted(class_profile(census_group).counts.items()))

    bench(census_label, census)

    S8 = PermGroup.symmetric(8)
    C8 = PermGroup.from_cycles(["(1 2 3 4 5 6 7 8)"], 8)
    reps = [parse_cycles(c, 8) for c in ["(1 2)", "(1 2 3)", "(1 2)(3 4)", "(1 2 3 4 5 6)", "(1 2 3 4 5 6 7 8)"]]

    def coset_fix():
        ca = coset_action(S8, C8)
        from hsplab.coset import fix_in_X

        return tuple(fix_in_X(ca, g) for g in reps)

    bench("coset table + fix counts: S_8 / C_8 (5040)", coset_fix)


if __name__ == "__main__":
    main()
