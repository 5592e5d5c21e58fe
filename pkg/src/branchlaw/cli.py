"""Command-line front end: JSON reports and CSV tables for every module.

Exit codes: 0 success (or every verification passed), 1 a verification failed,
2 invalid usage.  Output for fixed flags and seed is byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

SCHEMA_VERSION = 1
ENV_SEED = "BRANCHLAW_SEED"
ENV_THREADS = "BRANCHLAW_THREADS"


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    m: int
    k_max: int = 6
    tolerance: float = 1e-8
    seed: int = 0
    output: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if not self.n >= self.m >= 1:
            raise UsageError(f"need n >= m >= 1, got n={self.n}, m={self.m}")
        if not self.tolerance > 0:
            raise UsageError("tolerance must be positive")
        if self.k_max < 0:
            raise UsageError("k_max must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        if self.format not in ("json", "csv"):
            raise UsageError("format is json or csv")


def _jsonable(obj):
    from .exact_core import rational_to_str
    if isinstance(obj, Fraction):
        return rational_to_str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def _env_record(threads: int, seed_source: str) -> dict:
    return {"threads": threads, "seed_source": seed_source}


def _emit(payload: dict, args) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "command": args.command, **payload,
           "environment": _env_record(args.threads, args.seed_source)}
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    _write(text, args.output)


def _write(text: str, path: Optional[str]) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["%.17g" % v for v in row])
    return buf.getvalue()


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _parse_coord(v: str):
    from .exact_core import rational_from_str
    try:
        return rational_from_str(v)
    except ValueError:
        return float(v)


# -- subcommands ----------------------------------------------------------------


def cmd_psi(args) -> int:
    from .sympoly import build_psi, psi_norm_sq
    ints = args.indices
    if len(ints) == 3:
        n, m, k = ints
    elif len(ints) == 2:
        n, (m, k) = None, ints
    else:
        raise UsageError("psi takes [n] m k")
    if n is not None:
        RunConfig(n, m)
    if m < 1 or k < 0:
        raise UsageError("need m >= 1 and k >= 0")
    p = build_psi(m, k)
    payload = {"m": m, "k": k, "n": n}
    if args.eval:
        x = [_parse_coord(v) for v in args.eval.split(",")]
        if len(x) != m:
            raise UsageError(f"--eval needs {m} coordinates")
        val = p.evaluate(x)
        payload["point"] = [str(v) for v in x]
        if isinstance(val, (Fraction, int)):
            payload["value"] = Fraction(val)
            payload["value_float"] = float(val)
        else:
            payload["value"] = float(val)
    else:
        payload["polynomial"] = p.to_json()
    if n is not None:
        payload["norm_sq"] = psi_norm_sq(n, m, k)
    _emit(payload, args)
    return 0


def cmd_coeffs(args) -> int:
    from .radial_ops import jacobi_coeffs
    cfg = RunConfig(args.n, args.m, args.k_max)
    rows = [jacobi_coeffs(cfg.n, cfg.m, k).to_json() for k in range(cfg.k_max + 1)]
    _emit({"n": cfg.n, "m": cfg.m, "k_max": cfg.k_max, "coefficients": rows}, args)
    return 0


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("grid is x_min:x_max:steps")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}") from exc
    if not 0 < lo < hi or steps < 2:
        raise UsageError("grid needs 0 < x_min < x_max and steps >= 2")
    return lo, hi, steps


def cmd_measure(args) -> int:
    from .hahn import hahn_params
    from .plancherel import atoms, density_table
    cfg = RunConfig(args.n, args.m, format=args.format)
    p = hahn_params(cfg.n, cfg.m)
    lo, hi, steps = _parse_grid(args.grid)
    table = density_table(p, lo, hi, steps)
    text = csv_text(["x", "density"], table)
    if cfg.format == "csv":
        _write(text, args.output)
        return 0
    if args.csv:
        _write(text, args.csv)
    _emit({"n": cfg.n, "m": cfg.m, "params": p.to_json(),
           "atoms": [a.to_json() for a in atoms(p)],
           "grid": {"x_min": lo, "x_max": hi, "steps": steps},
           "density_csv": args.csv}, args)
    return 0


def cmd_spectrum(args) -> int:
    from .spectral_transform import branching_summary
    cfg = RunConfig(args.n, args.m)
    _emit(branching_summary(cfg.n, cfg.m), args)
    return 0


SUITES = ("recurrence", "orthogonality", "unitarity", "group", "expansion", "all")


def _suite_recurrence(n, m, k_max, tol, seed):
    from .radial_ops import invariant_product_holds, jacobi_coeffs, verify_recurrence
    rep = verify_recurrence(n, m, k_max)
    rep["factored_A"] = all(jacobi_coeffs(n, m, k).A == jacobi_coeffs(n, m, k).A_factored for k in range(k_max + 1))
    rep["invariant_product"] = all(invariant_product_holds(n, m, k) for k in range(k_max + 1))
    rep["pass"] = rep["pass"] and rep["factored_A"] and rep["invariant_product"]
    return rep


def _suite_orthogonality(n, m, k_max, tol, seed):
    from .plancherel import PlancherelMeasure, SpectralFunction, verify_orthogonality
    mu = PlancherelMeasure.of(n, m)
    rep = verify_orthogonality(n, m, k_max, tol, mu)
    one = float(mu.integrate(SpectralFunction(lambda y: np.ones_like(y), 0)))
    mass_err = abs(one - mu.total_mass) / mu.total_mass
    rep["total_mass"] = {"value": one, "expected": mu.total_mass, "rel_error": mass_err}
    rep["pass"] = rep["pass"] and mass_err <= 1e-9
    return rep


def _suite_unitarity(n, m, k_max, tol, seed):
    from .plancherel import PlancherelMeasure
    from .spectral_transform import parseval_check, random_coefficients, verify_operator_matrix, verify_unitarity
    mu = PlancherelMeasure.of(n, m)
    rng = np.random.default_rng(seed)
    checks = [parseval_check(random_coefficients(n, m, 1 + (i % (k_max + 1)), rng), tol, mu) for i in range(8)]
    rep = {
        "gram": verify_unitarity(n, m, k_max, tol, mu),
        "operator": verify_operator_matrix(n, m, k_max, tol, mu),
        "parseval_max_rel_error": max(c["rel_error"] for c in checks),
    }
    rep["pass"] = rep["gram"]["pass"] and rep["operator"]["pass"] and rep["parseval_max_rel_error"] <= tol
    return rep


def _suite_group(n, m, k_max, tol, seed):
    from .geometry import verify_group_identities
    pairs = ((n, m),) if n is not None else ((3, 1), (4, 2), (5, 2))
    return verify_group_identities(pairs, trials=100, seed=seed, tol=tol)


def _suite_expansion(n, m, k_max, tol, seed, N=10**6):
    from .geometry import mc_T1, t1_norm_sq, t1_series
    z = np.zeros((n, m))
    for i in range(m):
        z[i, i] = 0.5 / (i + 1)
    mc = mc_T1(n, m, z, N, seed)
    series = t1_series(n, m, z, max(k_max, 10))
    sigmas = abs(mc["estimate"] - series) / mc["std_error"]
    norm = t1_norm_sq(n, m, 2000)
    rep = {"z_diag": [float(z[i, i]) for i in range(m)], "mc": mc, "series": series,
           "sigmas": sigmas, "norm_converges": norm["converges"], "norm_limit": norm["limit"],
           "norm_partial_sum": float(norm["partial_sums"][-1])}
    rep["pass"] = sigmas <= 3.0
    return rep


_SUITE_TOL = {"recurrence": 0.0, "orthogonality": 1e-8, "unitarity": 1e-7, "group": 1e-9, "expansion": 0.0}


def run_suite(name: str, n, m, k_max, tol, seed) -> dict:
    fn = {"recurrence": _suite_recurrence, "orthogonality": _suite_orthogonality,
          "unitarity": _suite_unitarity, "group": _suite_group, "expansion": _suite_expansion}[name]
    tol = _SUITE_TOL[name] if tol is None else tol
    return fn(n, m, k_max, tol, seed)


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"suite must be one of {SUITES}")
    if (args.n is None) != (args.m is None):
        raise UsageError("give both n and m or neither")
    n, m = args.n, args.m
    if n is not None:
        RunConfig(n, m, args.k_max if args.k_max is not None else 6, args.tol or 1e-8, args.seed)
    elif args.suite not in ("group", "all"):
        n, m = 5, 1
    k_max = 6 if args.k_max is None else args.k_max
    names = [s for s in SUITES if s != "all"] if args.suite == "all" else [args.suite]
    reports = {}
    for name in names:
        if n is None and name != "group":
            grid = [(5, 1), (6, 2), (4, 2), (7, 3)]
            reports[name] = [run_suite(name, a, b, k_max, args.tol, args.seed) for a, b in grid]
        else:
            reports[name] = run_suite(name, n, m, k_max, args.tol, args.seed)
    passed = all(all(r["pass"] for r in rep) if isinstance(rep, list) else rep["pass"]
                 for rep in reports.values())
    _emit({"suite": args.suite, "n": n, "m": m, "k_max": k_max, "seed": args.seed,
           "reports": reports, "pass": passed}, args)
    return 0 if passed else 1


def cmd_t1(args) -> int:
    from .geometry import mc_T1, t1_series
    cfg = RunConfig(args.n, args.m, seed=args.seed)
    diag = _parse_floats(args.z)
    if len(diag) != cfg.m:
        raise UsageError(f"--z needs {cfg.m} diagonal entries")
    z = np.zeros((cfg.n, cfg.m))
    for i, v in enumerate(diag):
        z[i, i] = v
    if max(abs(v) for v in diag) >= 1:
        raise UsageError("z must lie strictly inside the domain")
    mc = mc_T1(cfg.n, cfg.m, z, args.N, cfg.seed, args.threads)
    series = t1_series(cfg.n, cfg.m, z, args.k_max)
    sig = abs(mc["estimate"] - series) / mc["std_error"] if mc["std_error"] > 0 else 0.0
    _emit({"n": cfg.n, "m": cfg.m, "z_diag": diag, **mc, "series": series,
           "series_k_max": args.k_max, "sigmas": sig, "agree_3sigma": sig <= 3.0}, args)
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)

    ap = argparse.ArgumentParser(prog="branchlaw", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psi", parents=[common], help="invariant polynomial psi_k")
    p.add_argument("indices", type=int, nargs="+", metavar="INT", help="[n] m k")
    p.add_argument("--eval", default=None, help="comma-separated point (rationals p/q allowed)")
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("coeffs", parents=[common], help="exact recurrence coefficients")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("k_max", type=int)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("measure", parents=[common], help="density table and atoms")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--grid", default="0.05:10:200", help="x_min:x_max:steps")
    p.add_argument("--csv", default=None, help="also write the density table to this path")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("spectrum", parents=[common], help="branching summary")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("k_max", type=int, nargs="?")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("t1", parents=[common], help="Monte Carlo boundary integral vs series")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--z", required=True, help="diagonal entries of z, comma-separated")
    p.add_argument("--N", type=int, default=10**6)
    p.add_argument("--k-max", dest="k_max", type=int, default=10)
    p.set_defaults(func=cmd_t1)
    return ap


def _resolve_env(args) -> None:
    if args.seed is None:
        env = os.environ.get(ENV_SEED)
        try:
            args.seed, args.seed_source = (int(env), "env") if env is not None else (0, "default")
        except ValueError as exc:
            raise UsageError(f"{ENV_SEED} is not an integer") from exc
    else:
        args.seed_source = "flag"
    if args.threads is None:
        try:
            args.threads = int(os.environ.get(ENV_THREADS, "1"))
        except ValueError as exc:
            raise UsageError(f"{ENV_THREADS} is not an integer") from exc
    if args.threads < 1:
        raise UsageError("threads must be positive")
    if not 0 <= args.seed < 2**64:
        raise UsageError("seed must be a 64-bit unsigned integer")


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _resolve_env(args)
        return args.func(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"branchlaw: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
