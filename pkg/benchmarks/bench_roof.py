"""Compare the compiled and plain ensemble-search backends on one problem."""

import argparse
import time

import numpy as np

from qcohere import builtin, convex_roof_upper
from qcohere._accel import NUMBA_AVAILABLE, NUMBA_ENABLED


def random_density(rng, d, rank):
    w = rng.dirichlet(np.ones(rank))
    rho = np.zeros((d, d), dtype=complex)
    for k in range(rank):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
        rho += w[k] * np.outer(v, v.conj())
    return rho


def time_backend(f, rho, backend, restarts, seed, repeats):
    best = np.inf
    value = None
    for _ in range(repeats):
        start = time.perf_counter()
        value = convex_roof_upper(
            f, rho, restarts=restarts, seed=seed, backend=backend
        ).value
        best = min(best, time.perf_counter() - start)
    return value, best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--rank", type=int, default=3)
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--functional", default="shannon",
                    choices=["shannon", "l1", "alpha", "kyfan"])
    args = ap.parse_args()

    f = builtin(
        args.functional,
        alpha=0.5 if args.functional == "alpha" else None,
        l=2 if args.functional == "kyfan" else None,
    )
    rng = np.random.default_rng(args.seed)
    rho = random_density(rng, args.dim, args.rank)
    print(f"problem: d={args.dim}, rank={args.rank}, functional={f.name}, "
          f"restarts={args.restarts}")

    if not (NUMBA_AVAILABLE and NUMBA_ENABLED):
        print("compiled backend unavailable or disabled; timing the plain one only")
        value, secs = time_backend(f, rho, "numpy", args.restarts, args.seed, args.repeats)
        print(f"numpy: {secs:.3f} s, value {value:.12f}")
        return

    convex_roof_upper(f, rho, restarts=1, seed=args.seed, backend="numba")  # warm the jit cache
    v_fast, t_fast = time_backend(f, rho, "numba", args.restarts, args.seed, args.repeats)
    v_ref, t_ref = time_backend(f, rho, "numpy", args.restarts, args.seed, args.repeats)
    print(f"numba: {t_fast:.3f} s, value {v_fast:.12f}")
    print(f"numpy: {t_ref:.3f} s, value {v_ref:.12f}")
    print(f"speedup: {t_ref / t_fast:.1f}x, value difference {abs(v_fast - v_ref):.3e}")


if __name__ == "__main__":
    main()
