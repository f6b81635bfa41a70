"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from steklov import _kernels as K


def cases(rng):
    f, c = rng.uniform(0, 1, 64), rng.normal(size=64)
    ts = np.linspace(0, 200, 20000)
    L = rng.dirichlet(np.ones(14))
    cv = rng.uniform(-1, 1, 14)
    a, b = rng.uniform(0, 0.5, 10000), rng.uniform(0, 0.5, 10000)
    th = np.cumsum(rng.uniform(0.5, 2.0, 4))
    dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
    return [
        ("eval_trig (64 terms x 20000 t)", lambda m: getattr(K, f"eval_trig_{m}")(f, c, 0.3, ts)),
        ("deriv_trig (64 terms x 20000 t)", lambda m: getattr(K, f"deriv_trig_{m}")(f, c, ts)),
        ("sign_class_terms (n=14)", lambda m: getattr(K, f"sign_class_terms_{m}")(L, cv, 1.0)),
        ("closure_grid (10000 points)", lambda m: getattr(K, f"closure_grid_{m}")(a, b, dirs, 0.5)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if K.eval_trig_numba is None:
        print("numba not available, only the numpy path can run")
    modes = ["numpy"] + (["numba"] if K.eval_trig_numba is not None else [])
    print(f"{'kernel':<34}" + "".join(f"{m + ' ms':>12}" for m in modes) + f"{'speedup':>10}")
    for name, fn in cases(np.random.default_rng(0)):
        best = {}
        for m in modes:
            fn(m)  # warm up, triggers compilation
            best[m] = min(timeit.repeat(lambda: fn(m), number=1, repeat=args.repeat)) * 1e3
        row = f"{name:<34}" + "".join(f"{best[m]:>12.3f}" for m in modes)
        if "numba" in best:
            row += f"{best['numpy'] / best['numba']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
