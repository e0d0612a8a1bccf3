"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from perron_eig import _backend
from perron_eig.cyclic import detect_cyclic_order
from perron_eig.iteration import run_iteration
from perron_eig.matio import load_fixture
from perron_eig.refine import combined_method


def cases():
    ex53 = load_fixture("ex53")
    ex81 = load_fixture("ex81")
    rng = np.random.default_rng(0)
    big = rng.uniform(size=(32, 32))
    return {
        "iteration ex53 n=10,100,500": lambda: [run_iteration(ex53, None, n, 1.0) for n in (10, 100, 500)],
        "iteration 32x32 n=60": lambda: run_iteration(big, None, 60),
        "cyclic order ex81 N=100": lambda: detect_cyclic_order(ex81, 100),
        "combined method ex53 t=100": lambda: combined_method(ex53, 100, 20, 0.2, 100.0),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = sorted(_backend.BACKENDS)
    print(f"{'case':32s}" + "".join(f"{n:>12s}" for n in names) + f"{'speedup':>10s}")
    for label, fn in cases().items():
        times = {}
        for name in names:
            _backend.use(name)
            times[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:32s}" + "".join(f"{times[n]:12.4f}" for n in names) + f"{speed:9.1f}x")


if __name__ == "__main__":
    main()
