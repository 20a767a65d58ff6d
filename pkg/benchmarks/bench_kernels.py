"""Compare the compiled and pure-Python kernels on the two sequential loops.

    python benchmarks/bench_kernels.py [--points N] [--repeat R]
"""

import argparse
import time

import numpy as np

from chfif import _pykernels, evaluator, io

try:
    from chfif import _ckernels
except ImportError:
    _ckernels = None


def _best(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    system = io.load_config().build()
    c = system.arrays()
    maps = [c[k] for k in ("alpha", "beta", "gamma", "p0", "pN", "q0", "qN")]
    choices = np.random.default_rng(0).integers(0, system.N, args.points + evaluator.CHAOS_BURN_IN)
    xs = np.random.default_rng(1).uniform(system.data.x0, system.data.xN, args.points // 10)
    m1, m2 = evaluator.seed_error_bounds(system)
    eval_args = (c["nodes"], c["ynodes"], c["znodes"], *maps, m1, m2, 4e-14, 1e-7)

    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    results = {}
    print(f"{'kernel':<16}{'backend':<10}{'size':>10}{'best s':>12}")
    for name, mod in backends:
        t, out = _best(lambda: mod.chaos_game(c["nodes"], *maps, choices, evaluator.CHAOS_BURN_IN,
                                              system.data.x0, 0.0, 10.0), args.repeat)
        results[("chaos", name)] = (t, out)
        print(f"{'chaos_game':<16}{name:<10}{args.points:>10}{t:>12.4f}")
        t, out = _best(lambda: mod.evaluate_batch(xs, 60, *eval_args), args.repeat)
        results[("eval", name)] = (t, out)
        print(f"{'evaluate_batch':<16}{name:<10}{len(xs):>10}{t:>12.4f}")
    if _ckernels is None:
        print("compiled kernels not built; only the fallback was timed")
        return
    for kernel in ("chaos", "eval"):
        tp, op = results[(kernel, "python")]
        tc, oc = results[(kernel, "cython")]
        same = all(np.array_equal(a, b) for a, b in zip(op, oc))
        print(f"{kernel}: speedup {tp / tc:.1f}x, outputs bit-identical: {same}")


if __name__ == "__main__":
    main()
