"""Compare the compiled and numpy kernels.

    python3 benchmarks/bench_backends.py [--repeat N] [--max-r R]

Times one objective evaluation per backend for several r, then a full
multi-start optimization of the quadrature variance bound for r = 1..max_r.
"""
import argparse
import time

import numpy as np

from ncdegree import NormalOrderedPolynomial, OptimizerConfig, _kernels, bounds
from ncdegree._kernels import KIND_POLY_EIG, available_backends, load_backend


def time_objective(kern, r, repeat):
    mexp, nexp, coef = NormalOrderedPolynomial.quadrature_square().arrays()
    obj = kern.Objective(KIND_POLY_EIG, 1.0, r, 1, False, 1e6, mexp=mexp, nexp=nexp, coef=coef)
    xs = np.random.default_rng(0).normal(size=(repeat, 2 * r))
    start = time.perf_counter()
    for x in xs:
        obj(x)
    return (time.perf_counter() - start) / repeat


def time_search(name, max_r):
    saved = _kernels.kernels, _kernels.BACKEND
    _kernels.kernels, _kernels.BACKEND = load_backend(name), name
    try:
        obs = NormalOrderedPolynomial.quadrature_square()
        config = OptimizerConfig(heuristic_line_init=True)
        start = time.perf_counter()
        values = [bounds.optimize_bound(obs, r, 1, "inf", config).bound for r in range(1, max_r + 1)]
        return time.perf_counter() - start, values
    finally:
        _kernels.kernels, _kernels.BACKEND = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--repeat", type=int, default=2000)
    parser.add_argument("--max-r", type=int, default=3)
    args = parser.parse_args()
    names = available_backends()
    print("backends:", ", ".join(names))

    print(f"\nobjective evaluation (mean of {args.repeat})")
    print(f"{'r':>3} " + " ".join(f"{n:>12}" for n in names))
    for r in (1, 2, 4, 6, 9):
        cols = [time_objective(load_backend(n), r, args.repeat) for n in names]
        print(f"{r:>3} " + " ".join(f"{t * 1e6:>10.1f}us" for t in cols))

    print(f"\nquadrature bounds r = 1..{args.max_r}, default starts with line init")
    results = {n: time_search(n, args.max_r) for n in names}
    for n, (elapsed, values) in results.items():
        print(f"{n:>8}: {elapsed:8.2f} s  " + " ".join(f"{v:.6f}" for v in values))
    if len(results) == 2:
        (ta, va), (tb, vb) = results["native"], results["pure"]
        print(f"speedup {tb / ta:.1f}x, largest bound difference {max(abs(a - b) for a, b in zip(va, vb)):.1e}")


if __name__ == "__main__":
    main()
