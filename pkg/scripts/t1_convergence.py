"""Compare the boundary Monte Carlo estimate of T1 against the truncated series as N grows."""

import argparse

import numpy as np

from branchlaw.geometry import mc_T1, t1_series


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int)
    ap.add_argument("m", type=int)
    ap.add_argument("--z", default="0.5", help="comma separated diagonal of z")
    ap.add_argument("--k-max", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    diag = [float(s) for s in args.z.split(",")]
    z = np.zeros((args.n, args.m))
    for i, v in enumerate(diag):
        z[i, i] = v
    series = t1_series(args.n, args.m, z, args.k_max)
    print(f"series (k <= {args.k_max}): {series:.10f}")
    for N in (10**3, 10**4, 10**5, 10**6):
        mc = mc_T1(args.n, args.m, z, N, seed=args.seed)
        dev = (mc["estimate"] - series) / mc["std_error"]
        print(f"N={N:>8d}  mc {mc['estimate']:.6f} +- {mc['std_error']:.2e}  ({dev:+.2f} sigma)")


if __name__ == "__main__":
    main()
