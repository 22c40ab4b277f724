"""Compare the compiled and pure-Python mask kernels on random tables.

    python benchmarks/bench_kernels.py [--sizes 8 10 12 14] [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import timeit

from finmeasure import kernels
from finmeasure.kernels import MONOTONE, NULL_ADDITIVE


def monotone_table(rng: random.Random, n: int) -> list[int]:
    vals = [0] + [rng.randint(0, 50) for _ in range((1 << n) - 1)]
    for s in range(1 << n):
        for b in range(n):
            if s >> b & 1 and vals[s ^ (1 << b)] > vals[s]:
                vals[s] = vals[s ^ (1 << b)]
    return vals


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled kernels are not built; only the python backend will run")
    rng = random.Random(args.seed)
    jobs = {
        "variation_table": lambda k, v, n: k.variation_table(v, n, (1 << n) - 1),
        "atom_flags": lambda k, v, n: k.atom_flags(v, n),
        "monotone check": lambda k, v, n: k.first_violation(v, n, MONOTONE),
        "null_additive check": lambda k, v, n: k.first_violation(v, n, NULL_ADDITIVE),
    }
    print(f"{'kernel':<20} {'blocks':>6} " + " ".join(f"{name:>12}" for name in impls) + "   speedup")
    for n in args.sizes:
        vals = monotone_table(rng, n)
        for job, fn in jobs.items():
            times = {}
            results = {}
            for name, impl in impls.items():
                results[name] = fn(impl, vals, n)
                times[name] = min(timeit.repeat(lambda: fn(impl, vals, n), number=1, repeat=args.repeat))
            if len(results) > 1:
                first = list(results.values())
                assert all(bytes(r) == bytes(first[0]) if job == "atom_flags" else r == first[0]
                           for r in first), f"backends disagree on {job}"
            speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else ""
            cells = " ".join(f"{times[name] * 1e3:10.2f}ms" for name in impls)
            print(f"{job:<20} {n:>6} {cells} {speed}")


if __name__ == "__main__":
    main()
