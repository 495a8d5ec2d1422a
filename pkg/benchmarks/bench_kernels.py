"""Wall-clock comparison of the numba and numpy kernels.

    python benchmarks/bench_kernels.py [--quick]

JIT compilation is excluded: every kernel runs once on a tiny input first.
"""
import argparse
import time

import numpy as np

from rankcrank import brownian, kernels, samplers
from rankcrank._backend import HAVE_NUMBA, using_backend

P = (1 << 61) - 1


def timed(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(quick):
    N = 300 if quick else 1000
    n, count = (100_000, 500) if quick else (1_000_000, 2000)
    paths = 2000 if quick else 10_000
    cfg = samplers.SamplerConfig(n, seed=1)
    bcfg = brownian.BrownianConfig(seed=1, step=1e-4, count=paths)
    return [
        (f"rank_gf_mod N={N}", lambda: kernels.rank_gf_mod(N, P)),
        (f"crank_gf_mod N={N}", lambda: kernels.crank_gf_mod(N, P)),
        (f"fristedt n={n} x{count}", lambda: samplers.fristedt_sample(cfg, count)),
        (f"ball exit h=1e-4 x{paths}", lambda: brownian.sample_hitting_time(bcfg)),
    ]


def warm():
    kernels.rank_gf_mod(5, P)
    kernels.crank_gf_mod(5, P)
    samplers.fristedt_sample(samplers.SamplerConfig(50, seed=0), 5)
    kernels.ball_exit_chunk(5, 1e-2, "none", np.random.SeedSequence(0))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    results = {}
    for b in backends:
        with using_backend(b):
            warm()
            for name, fn in cases(args.quick):
                results.setdefault(name, {})[b] = timed(fn, args.repeat)
    print(f"{'kernel':32s} " + " ".join(f"{b:>10s}" for b in backends) + ("     speedup" if HAVE_NUMBA else ""))
    for name, row in results.items():
        line = f"{name:32s} " + " ".join(f"{row[b]:9.3f}s" for b in backends)
        if HAVE_NUMBA:
            line += f"  {row['numpy'] / row['numba']:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
