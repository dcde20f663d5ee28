"""Compare the compiled kernels with their pure-Python twins.

Usage: ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

import argparse
import timeit

import numpy as np

from turnpoint import _backend, _pykernels


def _cases():
    xs = np.linspace(-6.0, 6.0, 200)
    mu = [0.0, 1.0, 0.5]

    def airy(k):
        return lambda: [k.airy_maclaurin(float(x)) for x in xs]

    def taylor(k):
        return lambda: k.taylor_integrate(mu, 1e-3, -0.2, 1.0, 0.0, np.array([0.8]), 1e-12, 20,
                                          0.0)

    return [("airy_maclaurin x200", airy), ("taylor_integrate eps=1e-3 on [-0.2, 0.8]", taylor)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _backend.BACKEND != "cython":
        print("compiled extension not available; only the Python timings are meaningful")
    print(f"{'kernel':45s} {'cython [ms]':>12s} {'python [ms]':>12s} {'speedup':>8s}")
    for name, make in _cases():
        fast = make(_backend.kernels)
        slow = make(_pykernels)
        a, b = fast(), slow()
        if isinstance(a, tuple) and not np.allclose(np.asarray(a[0]), np.asarray(b[0]),
                                                     rtol=1e-10):
            raise SystemExit(f"{name}: backends disagree")
        tf = min(timeit.repeat(fast, number=1, repeat=args.repeat)) * 1e3
        ts = min(timeit.repeat(slow, number=1, repeat=args.repeat)) * 1e3
        print(f"{name:45s} {tf:12.3f} {ts:12.3f} {ts / tf:8.1f}")


if __name__ == "__main__":
    main()
