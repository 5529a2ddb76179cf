"""Time the compiled and pure-Python iteration kernels on the same workloads.

    python benchmarks/bench_kernels.py [--steps N] [--repeat R]
"""

import argparse
import time

import numpy as np

from qsodyn import _pykernels

try:
    from qsodyn import _ckernels
except ImportError:  # extension not built
    _ckernels = None

PARAMS = (0.0, 0.0, 0.5, 0.4, 0.1)  # alpha = a = 0, e = 0.1: attracting 2-cycle
X0 = (0.3, 0.3, 0.4)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels

    # advance never fires: tol = 0 means no gap is ever small enough
    workloads = {
        "trajectory": lambda k: k.trajectory(*PARAMS, X0, args.steps),
        "advance": lambda k: k.advance(*PARAMS, None, X0, args.steps, 0.0, 8, 0, 0, 0),
    }
    print(f"{'workload':<12}{'backend':<10}{'seconds':>12}{'steps/s':>14}")
    for name, work in workloads.items():
        base = None
        for label, mod in backends.items():
            t = best_of(lambda: work(mod), args.repeat)
            base = base or t
            print(f"{name:<12}{label:<10}{t:>12.4f}{args.steps / t:>14.3g}  x{base / t:.1f}")

    if "cython" in backends:
        a = _ckernels.trajectory(*PARAMS, X0, 10_000)
        b = _pykernels.trajectory(*PARAMS, X0, 10_000)
        print("bit-identical iterates:", bool(np.array_equal(a, b)))


if __name__ == "__main__":
    main()
