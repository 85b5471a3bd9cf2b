"""Benchmark the lattice-point counting kernels: numba JIT vs pure numpy.

Run:  python benchmarks/bench_kernels.py [--sizes 20,40,80] [--repeat 3]
Set QUASIVIS_NO_NUMBA=1 before launching to check the fallback path alone.
"""

import argparse
import time

import numpy as np

from quasivis import kernels


def one_case(rng, n, half):
    basis = np.eye(n) + 0.2 * rng.standard_normal((n, n))
    lo_x = np.full(n, -float(half))
    hi_x = np.full(n, float(half))
    lo_u, hi_u = kernels.integer_preimage_box(
        np.linalg.inv(basis), list(zip(lo_x, hi_x)))
    return basis, lo_u, hi_u, lo_x, hi_x


def bench(n, half, repeat, force_numpy):
    rng = np.random.default_rng(0)
    case = one_case(rng, n, half)
    # warm-up triggers the JIT compile so it is not timed
    kernels.count_lattice_points_in_box(*case, primitive=True,
                                        force_numpy=force_numpy)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        cnt, _ = kernels.count_lattice_points_in_box(
            *case, primitive=True, force_numpy=force_numpy)
        best = min(best, time.perf_counter() - t0)
    return cnt, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="20,40,80",
                    help="comma-separated box half-widths")
    ap.add_argument("--dims", default="2,3", help="comma-separated n")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    dims = [int(s) for s in args.dims.split(",")]

    print(f"default backend: {kernels.backend_name()}")
    print(f"{'n':>3} {'half':>6} {'count':>10} {'numpy (s)':>10}"
          f" {'numba (s)':>10} {'speedup':>8}")
    for n in dims:
        for half in sizes:
            cnt_np, t_np = bench(n, half, args.repeat, force_numpy=True)
            if kernels.USE_NUMBA:
                cnt_nb, t_nb = bench(n, half, args.repeat, force_numpy=False)
                assert cnt_nb == cnt_np
                print(f"{n:>3} {half:>6} {cnt_np:>10} {t_np:>10.4f}"
                      f" {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")
            else:
                print(f"{n:>3} {half:>6} {cnt_np:>10} {t_np:>10.4f}"
                      f" {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
