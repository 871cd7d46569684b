"""Time the compiled and numpy kernel backends on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from vconv import kernels


def workloads(rng):
    F = rng.normal(size=(200, 2049, 1))
    G = rng.normal(size=(2049, 1))
    U = rng.normal(size=(1025, 3))
    V = rng.normal(size=(2000, 200, 1)) * 0.01
    rows = np.arange(250, dtype=np.int64)
    A = rng.normal(size=(2000, 50, 1))
    E = np.ascontiguousarray(1.0 / np.arange(1, 2001)[:, None] * np.ones((1, 50)))
    w = np.array([0.5, -1.0, 2.0])
    return {
        "batch_sup 200x2049 sup-norm": lambda k: k.batch_sup(F, G, 0, 0, w),
        "diameter 1025x3 euclidean": lambda k: k.diameter(U, 1, 0, w),
        "tail_scan 250 rows x 200 pts, T=2000": lambda k: k.tail_scan(V, rows, 0.02, 1984, 0, 0, w),
        "abel_sums 2000 terms x 50 pts": lambda k: k.abel_sums(A, E),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    found = kernels.backends()
    jobs = workloads(np.random.default_rng(0))
    names = sorted(found)
    print(f"{'workload':40s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, job in jobs.items():
        best = {}
        for name in names:
            impl = found[name]
            job(impl)
            best[name] = min(timeit.repeat(lambda: job(impl), number=1, repeat=args.repeat))
        line = f"{label:40s}" + "".join(f"{best[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in best:
            line += f"{best['python'] / best['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
