"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each case reports the best wall time over ``--repeat`` runs and the speedup of
the compiled extension. Results of the two backends are compared as a sanity check.
"""

import argparse
import timeit

import numpy as np

from hipm_lab import _backend
from hipm_lab.measures import DPParams, Uniform, empirical_hierarchical_estimator


def cases(rng):
    p = DPParams(1.0, Uniform(0, 1))
    for n, m in ((64, 1000), (256, 1000), (256, 2000)):
        q1 = empirical_hierarchical_estimator(p, n, m, int(rng.integers(1 << 30)))
        q2 = empirical_hierarchical_estimator(p, n, m, int(rng.integers(1 << 30)))
        yield f"pairwise_w1 uniform n={n} m={m}", "pairwise_w1", (*q1.packed, *q2.packed)
    for n, k in ((64, 200), (256, 200)):
        X1 = np.sort(rng.uniform(0, 1, (n, k)), axis=1)
        X2 = np.sort(rng.uniform(0, 1, (n, k)), axis=1)
        W1 = rng.dirichlet(np.ones(k), size=n)
        W2 = rng.dirichlet(np.ones(k), size=n)
        yield f"pairwise_w1 weighted n={n} k={k}", "pairwise_w1", (X1, W1, X2, W2)
    for n in (64, 256, 1024):
        yield f"assignment n={n}", "assignment", (rng.uniform(0, 1, (n, n)),)


def best_time(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if _backend.compiled is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    rng = np.random.default_rng(args.seed)
    print(f"{'case':<40} {'python [s]':>11} {'compiled [s]':>13} {'speedup':>8}")
    for label, name, data in cases(rng):
        py_fn = getattr(_backend.fallback, name)
        c_fn = getattr(_backend.compiled, name)
        a, b = np.asarray(py_fn(*data)), np.asarray(c_fn(*data))
        if name == "pairwise_w1":
            np.testing.assert_allclose(a, b, atol=1e-10)
        else:
            cost = data[0]
            idx = np.arange(cost.shape[0])
            np.testing.assert_allclose(cost[idx, a].sum(), cost[idx, b].sum(), rtol=1e-12)
        t_py = best_time(py_fn, data, args.repeat)
        t_c = best_time(c_fn, data, args.repeat)
        print(f"{label:<40} {t_py:>11.4f} {t_c:>13.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
