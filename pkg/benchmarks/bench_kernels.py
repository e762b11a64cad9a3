"""Compare the compiled and pure-Python bit-row kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is run on the same seeded inputs under both backends; outputs are
checked for equality before timings are printed.
"""

import argparse
import timeit

import numpy as np

from supalg import _pykernels

try:
    from supalg import _ckernels
except ImportError:
    _ckernels = None


def random_rows(rng, n, density=0.3):
    M = rng.random((n, n)) < density
    return [int(sum(1 << b for b in range(n) if M[a, b])) for a in range(n)]


def cases(rng):
    for n in (4, 8, 16, 32, 64):
        r, s = random_rows(rng, n), random_rows(rng, n)
        yield f"compose n={n}", "compose_rows", (r, s)
        yield f"closure n={n}", "transitive_closure_rows", (random_rows(rng, n, 0.05),)
    for n in (4, 6, 8):
        table = [(a + b) % n for a in range(n) for b in range(n)]
        yield f"apply + on Z{n}", "apply_op_rows", (table, n, 2, [random_rows(rng, n), random_rows(rng, n)])
        quad = [(a - b + c - d) % n for a in range(n) for b in range(n) for c in range(n) for d in range(n)]
        yield f"apply 4-ary on Z{n}", "apply_op_rows", (quad, n, 4, [random_rows(rng, n, 0.4)] * 4)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'case':<24}{'python us':>12}{'cython us':>12}{'speedup':>10}")
    for label, name, inputs in cases(np.random.default_rng(args.seed)):
        py = getattr(_pykernels, name)
        t_py = min(timeit.repeat(lambda: py(*inputs), number=args.repeat, repeat=3)) / args.repeat * 1e6
        if _ckernels is None:
            print(f"{label:<24}{t_py:>12.1f}{'-':>12}{'-':>10}")
            continue
        cy = getattr(_ckernels, name)
        assert list(cy(*inputs)) == list(py(*inputs)), f"backends disagree on {label}"
        t_cy = min(timeit.repeat(lambda: cy(*inputs), number=args.repeat, repeat=3)) / args.repeat * 1e6
        print(f"{label:<24}{t_py:>12.1f}{t_cy:>12.1f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
