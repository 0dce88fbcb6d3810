"""Compare the compiled and pure Python exponential-sum kernels.

Times a Kloosterman sweep (the dominant inner loop of the Weil-bound
verification) on both backends and checks they agree bit for bit.

Usage: python benchmarks/bench_backends.py [--cmax 1200] [--samples 4]
"""

import argparse
import random
import time

from deltasum._backend import available_backends


def sweep(kernel, cases):
    acc = 0.0
    for a, b, c in cases:
        re, _ = kernel(a, b, c)
        acc += re
    return acc


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cmax", type=int, default=1200)
    parser.add_argument("--samples", type=int, default=4)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    cases = [
        (rng.randrange(0, c), rng.randrange(0, c), c)
        for c in range(2, args.cmax + 1)
        for _ in range(args.samples)
    ]
    backends = available_backends()
    print(f"backends available: {', '.join(backends)}")
    print(f"workload: {len(cases)} sums, moduli up to {args.cmax}")

    timings = {}
    checks = {}
    for name, kernel in backends.items():
        start = time.perf_counter()
        checks[name] = sweep(kernel, cases)
        timings[name] = time.perf_counter() - start
        print(f"  {name:7s} {timings[name]:8.3f} s")

    if len(backends) == 2:
        agree = all(
            backends["python"](a, b, c) == backends["c"](a, b, c)
            for a, b, c in cases[:: max(1, len(cases) // 200)]
        )
        print(f"bit-for-bit agreement on sampled cases: {agree}")
        print(f"speedup c over python: {timings['python'] / timings['c']:.1f}x")


if __name__ == "__main__":
    main()
