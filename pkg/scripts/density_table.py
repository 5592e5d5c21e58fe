"""Print the continuous density and the atoms of the spectral measure for one (n, m)."""

import argparse

from branchlaw.plancherel import PlancherelMeasure, density_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int)
    ap.add_argument("m", type=int)
    ap.add_argument("--x-min", type=float, default=0.05)
    ap.add_argument("--x-max", type=float, default=6.0)
    ap.add_argument("--steps", type=int, default=25)
    args = ap.parse_args()

    mu = PlancherelMeasure.of(args.n, args.m)
    print(f"# n={args.n} m={args.m} total mass {mu.total_mass:.15g} X_max {mu.X_max:.3f}")
    for at in mu.atoms:
        print(f"# atom j={at.j} y={at.y} mass={at.mass:.15g} casimir={at.casimir}")
    for x, d in density_table(mu.params, args.x_min, args.x_max, args.steps):
        print(f"{x:10.5f} {d:.12e}")


if __name__ == "__main__":
    main()
