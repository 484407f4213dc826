"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from grover_exact import kernels

PI = math.pi


def cases(backend):
    lams = np.linspace(0.001, 1.0, 4000)
    alphas = np.linspace(0.05 * PI, PI, 500)
    marked = np.zeros(1 << 14, dtype=np.uint8)
    marked[::97] = 1
    amps0 = np.full(1 << 14, 2**-7, dtype=np.complex128)

    def evolve():
        amps = amps0.copy()
        backend.evolve_statevector(amps, marked, 0.3 * PI, -0.3 * PI, 20)

    return {
        "success_grid (4000 lambdas, m=20)": lambda: backend.success_grid(0.268 * PI, -0.268 * PI, 0.7, 20, lams),
        "last_failure_indices (500 x 4000, m=3)": lambda: backend.last_failure_indices(alphas, 3, 0.8, lams),
        "evolve_statevector (n=14, m=20)": evolve,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    names = kernels.available_backends()
    timings = {}
    for name in names:
        for label, fn in cases(kernels.get_backend(name)).items():
            fn()
            timings.setdefault(label, {})[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))

    print(f"{'kernel':42s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, row in timings.items():
        line = f"{label:42s}" + "".join(f"{row[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in row and "python" in row:
            line += f"{row['python'] / row['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
