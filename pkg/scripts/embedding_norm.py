"""Partial sums of alpha_k^2 and their log-log decay slope over a grid of (n, m)."""

from branchlaw.geometry import decay_slope, t1_norm_sq


def main():
    print(f"{'n':>3} {'m':>3} {'sum k<=200':>14} {'limit':>10} {'slope':>8} {'-(n-m)/2':>9}")
    for m in (1, 2, 3):
        for n in range(m, m + 9):
            info = t1_norm_sq(n, m, 200)
            lim = f"{float(info['limit']):.6f}" if info["converges"] else "inf"
            print(f"{n:3d} {m:3d} {float(info['partial_sums'][-1]):14.6f} {lim:>10} "
                  f"{decay_slope(n, m):8.3f} {-(n - m) / 2:9.1f}")


if __name__ == "__main__":
    main()
