"""Time the numba and numpy shot-noise kernels on the same workload.

    python3 benchmarks/bench_shot_noise.py --samples 20000 --lambda-per-km2 1 9

Both kernels consume the same counter-based stream, so besides timing this
checks that they return the same point counts and matching interference.
"""

import argparse
import math
import time

import numpy as np

from fblnet.params import LAMBDA_PER_KM2, NetworkParams
from fblnet.sim import default_r_max
from fblnet.sim._kernels import KERNELS


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--lambda-per-km2", type=float, nargs="+", default=[1.0, 9.0])
    ap.add_argument("--r0", type=float, default=250.0)
    ap.add_argument("--eta", type=float, nargs="+", default=[4.0, 3.5])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    # compile outside the timed region
    KERNELS["numba"](0, 0, 4, 1.0, 1.0, 4.0, 2.0, True)

    print(f"{'lambda/km2':>10} {'eta':>5} {'points/sample':>14} {'numba ns/pt':>12} {'numpy ns/pt':>12} "
          f"{'speedup':>8} {'max rel diff':>13}")
    for lam_km2 in args.lambda_per_km2:
        for eta in args.eta:
            params = NetworkParams(lam_km2 * LAMBDA_PER_KM2, args.r0, eta)
            r_max = default_r_max(params)
            kargs = (1.0 / (params.lambda_density * math.pi), args.r0**2, r_max**2, 0.5 * eta, True)
            results = {}
            for name, kernel in KERNELS.items():
                results[name] = best_of(lambda k=kernel: k(7, 0, args.samples, *kargs), args.repeats)
            (t_nb, (z_nb, c_nb, _)), (t_np, (z_np, c_np, _)) = results["numba"], results["numpy"]
            assert np.array_equal(c_nb, c_np), "kernels disagree on point counts"
            points = int(c_nb.sum())
            diff = float(np.max(np.abs(z_nb - z_np) / np.maximum(np.abs(z_nb), 1e-300)))
            print(f"{lam_km2:>10g} {eta:>5g} {points / args.samples:>14.1f} {t_nb / points * 1e9:>12.1f} "
                  f"{t_np / points * 1e9:>12.1f} {t_np / t_nb:>8.2f} {diff:>13.1e}")


if __name__ == "__main__":
    main()
