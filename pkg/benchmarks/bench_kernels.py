"""Compare compiled and numpy kernels for the permanent and immanant class sums.

Usage: python benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from bosonbunch import linalg


def _time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    backends = ["python"] + (["compiled"] if linalg._compiled is not None else [])
    if len(backends) == 1:
        print("compiled kernels unavailable; timing the numpy fallback only")
    rng = np.random.default_rng(args.seed)
    cases = [("permanent", n) for n in (8, 12, 16, 20)] + [("immanants", n) for n in (6, 7, 8, 9)]

    header = f"{'kernel':<10} {'n':>3}" + "".join(f" {b + ' [s]':>14}" for b in backends)
    print(header + ("  speedup" if len(backends) == 2 else ""))
    for kernel, n in cases:
        a = linalg.random_psd(rng, n) / n
        fn = (lambda: linalg.permanent(a)) if kernel == "permanent" else (lambda: linalg.normalized_immanants(a))
        times, values = [], []
        for b in backends:
            linalg.use_backend(b)
            fn()  # warm caches (permutation tables, class codes)
            times.append(_time(fn, args.repeat))
            values.append(fn())
        row = f"{kernel:<10} {n:>3}" + "".join(f" {t:>14.4g}" for t in times)
        if len(backends) == 2:
            row += f"  {times[0] / times[1]:7.1f}x"
            ref, got = values
            if kernel == "permanent":
                assert abs(ref - got) <= 1e-9 * max(1.0, abs(ref)), (ref, got)
            else:
                assert all(abs(ref[k] - got[k]) <= 1e-9 for k in ref)
        print(row)
    linalg.use_backend(backends[-1])


if __name__ == "__main__":
    main()
