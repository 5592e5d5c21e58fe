"""Matrix models: the domain of n x m matrices, SU(n,m) and SO(n,m), the real Stiefel
boundary, Jacobians and kernels, and Monte Carlo checks of the boundary integral.

Group elements are (n+m) x (n+m) matrices in blocks [[A, B], [C, D]] with A of
size n x n.  They preserve J = diag(I_n, -I_m) and act by
g(z) = (Az + B)(Cz + D)^{-1}.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from .exact_core import pochhammer
from .hahn import hahn_params
from .sympoly import build_psi

MC_CHUNK = 1 << 16


def J_form(n: int, m: int) -> np.ndarray:
    return np.diag(np.r_[np.ones(n), -np.ones(m)])


@dataclass(frozen=True)
class DomainPoint:
    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z)
        if z.ndim != 2:
            raise ValueError("a domain point is an n x m matrix")
        object.__setattr__(self, "z", z)

    @property
    def shape(self):
        return self.z.shape

    def eigen_floor(self) -> float:
        n = self.z.shape[0]
        return float(np.linalg.eigvalsh(np.eye(n) - self.z @ self.z.conj().T).min())

    def check(self, floor: float = 0.0) -> "DomainPoint":
        if not self.eigen_floor() > floor:
            raise ValueError("I - z z* is not positive definite")
        return self


@dataclass(frozen=True)
class GroupElement:
    g: np.ndarray
    n: int
    m: int

    def __post_init__(self):
        g = np.asarray(self.g)
        if g.shape != (self.n + self.m,) * 2:
            raise ValueError(f"expected a {(self.n + self.m,) * 2} matrix, got {g.shape}")
        object.__setattr__(self, "g", g)

    @property
    def blocks(self):
        n = self.n
        return self.g[:n, :n], self.g[:n, n:], self.g[n:, :n], self.g[n:, n:]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.g) or bool(np.all(self.g.imag == 0))

    def form_defect(self) -> float:
        J = J_form(self.n, self.m)
        return float(np.max(np.abs(self.g.conj().T @ J @ self.g - J)))

    def det_defect(self) -> float:
        return float(abs(np.linalg.det(self.g) - 1))

    def check(self, tol: float = 1e-10) -> "GroupElement":
        if self.form_defect() > tol or self.det_defect() > tol:
            raise ValueError("matrix is not in SU(n,m)")
        return self

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.g @ other.g, self.n, self.m)


@dataclass(frozen=True)
class StiefelPoint:
    v: np.ndarray

    def check(self, tol: float = 1e-12) -> "StiefelPoint":
        m = self.v.shape[1]
        if np.max(np.abs(self.v.T @ self.v - np.eye(m))) > tol:
            raise ValueError("columns are not orthonormal")
        return self


def _z(z) -> np.ndarray:
    return z.z if isinstance(z, DomainPoint) else np.asarray(z)


def _g(g) -> GroupElement:
    if isinstance(g, GroupElement):
        return g
    raise TypeError("expected a GroupElement")


def _solve_right(X: np.ndarray, D: np.ndarray) -> np.ndarray:
    """X D^{-1}, raising on a singular D."""
    if abs(np.linalg.det(D)) < 1e-300 or np.linalg.cond(D) > 1e14:
        raise np.linalg.LinAlgError("Cz + D is singular")
    return np.linalg.solve(D.T, X.T).T


def mobius_action(g: GroupElement, z) -> DomainPoint:
    A, B, C, D = _g(g).blocks
    z = _z(z)
    return DomainPoint(_solve_right(A @ z + B, C @ z + D))


@dataclass(frozen=True)
class HCFactors:
    """g exp(z) = P+ K P-, with P+ = [[I, plus], [0, I]], K = diag(k_upper, k_lower),
    P- = [[I, 0], [minus, I]]."""

    plus: np.ndarray
    k_upper: np.ndarray
    k_lower: np.ndarray
    minus: np.ndarray

    @property
    def k_plus_det(self) -> complex:
        return complex(np.linalg.det(self.k_upper))

    def k_component(self) -> np.ndarray:
        n, m = self.plus.shape
        K = np.zeros((n + m, n + m), dtype=np.result_type(self.k_upper, self.k_lower))
        K[:n, :n] = self.k_upper
        K[n:, n:] = self.k_lower
        return K

    def product(self) -> np.ndarray:
        n, m = self.plus.shape
        P = np.eye(n + m, dtype=complex)
        P[:n, n:] = self.plus
        Q = np.eye(n + m, dtype=complex)
        Q[n:, :n] = self.minus
        return P @ self.k_component() @ Q


def exp_z(z) -> np.ndarray:
    z = _z(z)
    n, m = z.shape
    out = np.eye(n + m, dtype=np.result_type(z, float))
    out[:n, n:] = z
    return out


def harish_chandra_factor(g: GroupElement, z) -> HCFactors:
    A, B, C, D = _g(g).blocks
    z = _z(z)
    Dz = C @ z + D
    plus = _solve_right(A @ z + B, Dz)
    return HCFactors(plus, A - plus @ C, Dz, np.linalg.solve(Dz, C))


def jacobian(g: GroupElement, z) -> complex:
    """Complex Jacobian of z -> g(z): det of Y -> M Y N is det(M)^m det(N)^n."""
    f = harish_chandra_factor(g, z)
    n, m = f.plus.shape
    return complex(np.linalg.det(f.k_upper) ** m / np.linalg.det(f.k_lower) ** n)


def kernel_h(z, w) -> complex:
    z, w = _z(z), _z(w)
    return complex(np.linalg.det(np.eye(z.shape[0]) - z @ w.conj().T))


def bergman_kernel(z, w) -> complex:
    n, m = _z(z).shape
    return kernel_h(z, w) ** (-(n + m))


# -- special elements --------------------------------------------------------


def shilov_base(n: int, m: int) -> np.ndarray:
    """e_1 + ... + e_m, the n x m matrix [I_m; 0]."""
    out = np.zeros((n, m))
    out[:m, :m] = np.eye(m)
    return out


def a0_element(n: int, m: int, t) -> GroupElement:
    """exp(t_1 E_1 + ... + t_m E_m): cosh on the diagonal pairs, sinh off it."""
    t = np.broadcast_to(np.asarray(t, dtype=float), (m,))
    g = np.eye(n + m)
    for j in range(m):
        g[j, j] = g[n + j, n + j] = math.cosh(t[j])
        g[j, n + j] = g[n + j, j] = math.sinh(t[j])
    return GroupElement(g, n, m)


def _three_block(n: int, m: int, blocks: dict) -> np.ndarray:
    # block rows/cols of sizes m, n - m, m
    sizes = [m, n - m, m]
    offs = np.cumsum([0] + sizes)
    X = np.zeros((n + m, n + m))
    for (i, j), b in blocks.items():
        X[offs[i]:offs[i + 1], offs[j]:offs[j + 1]] = b
    return X


def nilpotent_q(n: int, m: int, q: np.ndarray) -> GroupElement:
    """exp X_q for antisymmetric m x m q."""
    q = np.asarray(q, dtype=float)
    if np.max(np.abs(q + q.T), initial=0.0) > 1e-14:
        raise ValueError("q must be antisymmetric")
    X = _three_block(n, m, {(0, 0): -q, (0, 2): q, (2, 0): -q, (2, 2): q})
    return GroupElement(expm(X), n, m)


def nilpotent_z(n: int, m: int, zz: np.ndarray) -> GroupElement:
    """exp X_z for an (n-m) x m real block zz."""
    zz = np.asarray(zz, dtype=float).reshape(n - m, m)
    X = _three_block(n, m, {(0, 1): zz.T, (1, 0): -zz, (1, 2): zz, (2, 1): zz.T})
    return GroupElement(expm(X), n, m)


# -- sampling ------------------------------------------------------------------


def sample_algebra(n: int, m: int, kind: Literal["SU", "SO"], scale: float,
                   rng: np.random.Generator) -> np.ndarray:
    """Random X with X* J + J X = 0 and tr X = 0, Frobenius norm equal to scale."""
    if kind == "SU":
        def cplx(*shape):
            return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        P, R, Q = cplx(n, n), cplx(m, m), cplx(n, m)
        P, R = P - P.conj().T, R - R.conj().T
    elif kind == "SO":
        P, R, Q = rng.standard_normal((n, n)), rng.standard_normal((m, m)), rng.standard_normal((n, m))
        P, R = P - P.T, R - R.T
    else:
        raise ValueError(f"unknown group kind {kind!r}")
    X = np.block([[P, Q], [Q.conj().T, R]])
    X = X - np.trace(X) / (n + m) * np.eye(n + m)
    norm = np.linalg.norm(X)
    return X * (scale / norm) if norm > 0 else X


def sample_group(n: int, m: int, kind: Literal["SU", "SO"] = "SU", scale: float = 1.0,
                 seed: int = 0) -> GroupElement:
    rng = np.random.default_rng(seed)
    if scale == 0:
        return GroupElement(np.eye(n + m, dtype=complex if kind == "SU" else float), n, m)
    g = expm(sample_algebra(n, m, kind, scale, rng))
    if kind == "SO":
        g = g.real
    return GroupElement(g, n, m)


def sample_domain_point(n: int, m: int, seed: int = 0, radius: float = 0.9,
                        real: bool = False) -> DomainPoint:
    """A point with operator norm uniform in [0, radius)."""
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, m))
    if not real:
        G = G + 1j * rng.standard_normal((n, m))
    G = G / np.linalg.norm(G, 2)
    return DomainPoint(G * radius * rng.uniform()).check()


def _stiefel_batch(rng: np.random.Generator, count: int, n: int, m: int) -> np.ndarray:
    G = rng.standard_normal((count, n, m))
    Q, R = np.linalg.qr(G)
    signs = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    signs[signs == 0] = 1.0
    return Q * signs[:, None, :]


def sample_stiefel(n: int, m: int, seed: int = 0) -> StiefelPoint:
    """Orthonormalized Gaussian n x m matrix (QR with a positive diagonal of R)."""
    if n < m:
        raise ValueError("need n >= m")
    return StiefelPoint(_stiefel_batch(np.random.default_rng(seed), 1, n, m)[0])


def stiefel_samples(n: int, m: int, count: int, seed: int = 0) -> np.ndarray:
    """Many Stiefel draws, chunked by the same scheme as the Monte Carlo."""
    out = []
    for c in range(-(-count // MC_CHUNK)):
        size = min(MC_CHUNK, count - c * MC_CHUNK)
        out.append(_stiefel_batch(np.random.default_rng([seed, c]), size, n, m))
    return np.concatenate(out) if out else np.zeros((0, n, m))


# -- boundary integral and its series ---------------------------------------------


def sphere_moment(n: int, j: int) -> Fraction:
    """Integral of u_1^j over the normalized sphere S^{n-1}."""
    if n < 2 or j < 0:
        raise ValueError("need n >= 2 and j >= 0")
    if j % 2:
        return Fraction(0)
    k = j // 2
    return pochhammer(Fraction(1, 2), k) / pochhammer(Fraction(n, 2), k)


def expansion_coeff(n: int, k: int) -> Fraction:
    """Coefficient of psi_k in the boundary integral: (1/2)_k / ((n/2)_k (2k)!)."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return pochhammer(Fraction(1, 2), k) / (pochhammer(Fraction(n, 2), k) * math.factorial(2 * k))


def t1_series(n: int, m: int, z, k_max: int) -> float:
    """Truncated sum_k c_k psi_k(z) for a real z (psi_k read off the singular values)."""
    z = np.asarray(_z(z), dtype=float)
    if z.shape != (n, m):
        raise ValueError(f"expected an {n} x {m} matrix")
    x = np.linalg.svd(z, compute_uv=False)
    terms = [float(expansion_coeff(n, k)) * build_psi(m, k).evaluate(list(x)) for k in range(k_max + 1)]
    return math.fsum(terms)


def _t1_chunk(args):
    n, m, z, seed, c, size = args
    v = _stiefel_batch(np.random.default_rng([seed, c]), size, n, m)
    # det(I_n - z v^t) = det(I_m - v^t z)
    M = np.eye(m)[None] - np.einsum("bij,ik->bjk", v, z)
    vals = 1.0 / np.linalg.det(M)
    return math.fsum(vals), math.fsum(vals * vals)


def default_workers() -> int:
    return max(1, int(os.environ.get("BRANCHLAW_THREADS", "1")))


def mc_T1(n: int, m: int, z, N: int, seed: int = 0, workers: Optional[int] = None) -> dict:
    """Monte Carlo mean of det(I - z v^t)^{-1} over Stiefel draws, with its standard error.

    Chunk c of MC_CHUNK samples is drawn from default_rng([seed, c]); chunk sums are
    combined in chunk order, so the worker count never changes the result.
    """
    z = np.asarray(_z(z), dtype=float)
    if z.shape != (n, m):
        raise ValueError(f"expected an {n} x {m} matrix")
    if N < 2:
        raise ValueError("need N >= 2")
    DomainPoint(z).check()
    jobs = [(n, m, z, seed, c, min(MC_CHUNK, N - c * MC_CHUNK)) for c in range(-(-N // MC_CHUNK))]
    workers = default_workers() if workers is None else workers
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(_t1_chunk, jobs))
    else:
        parts = [_t1_chunk(j) for j in jobs]
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / N
    var = max(s2 / N - mean * mean, 0.0) * N / (N - 1)
    return {"estimate": mean, "std_error": math.sqrt(var / N), "N": N, "seed": seed}


def t1_norm_sq(n: int, m: int, k_max: int) -> dict:
    """Partial sums of alpha_k^2 = (m/2)_k / (n/2)_k; the limit is (n-2)/(n-m-2) when n-m > 2."""
    if not n >= m >= 1:
        raise ValueError("need n >= m >= 1")
    terms = []
    t = Fraction(1)
    for k in range(k_max + 1):
        if k:
            t = t * (Fraction(m, 2) + k - 1) / (Fraction(n, 2) + k - 1)
        terms.append(t)
    partial = np.cumsum([float(v) for v in terms])
    converges = n - m > 2
    return {
        "terms": terms,
        "partial_sums": partial,
        "limit": Fraction(n - 2, n - m - 2) if converges else None,
        "converges": converges,
    }


def alpha_sq_embedding(n: int, m: int, k: int) -> Fraction:
    return pochhammer(Fraction(m, 2), k) / pochhammer(Fraction(n, 2), k)


def decay_slope(n: int, m: int, k_lo: int = 50, k_hi: int = 200) -> float:
    """Least-squares slope of log alpha_k^2 against log k over [k_lo, k_hi]."""
    ks = np.arange(k_lo, k_hi + 1)
    lt = [math.lgamma(m / 2 + k) - math.lgamma(m / 2) - math.lgamma(n / 2 + k) + math.lgamma(n / 2) for k in ks]
    return float(np.polyfit(np.log(ks), lt, 1)[0])


@dataclass(frozen=True)
class StructureConstants:
    rho0_slope: Fraction
    density_exponent: Fraction
    tau_exponent: Fraction
    a0_jacobian_exponent: Fraction

    def to_json(self) -> dict:
        from .exact_core import rational_to_str
        return {k: rational_to_str(getattr(self, k)) for k in
                ("rho0_slope", "density_exponent", "tau_exponent", "a0_jacobian_exponent")}


def structure_constants(n: int, m: int) -> StructureConstants:
    if not n >= m >= 1:
        raise ValueError("need n >= m >= 1")
    return StructureConstants(
        Fraction(m * (n - 1)), Fraction(n - 1, n + m), Fraction(n - 2, n + m), Fraction(-(n + m))
    )


def casimir_discrete_check(n: int, m: int) -> tuple[Fraction, Fraction, bool]:
    """-(a^2 - c^2) at the first discrete point against -m(n-2)/4."""
    if n - m <= 2:
        raise ValueError("no discrete point unless n - m > 2")
    p = hahn_params(n, m)
    lhs = -(p.a**2 - p.c**2)
    rhs = Fraction(-m * (n - 2), 4)
    return lhs, rhs, lhs == rhs


# -- identity suite -------------------------------------------------------------


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def verify_group_identities(pairs: Sequence[tuple[int, int]] = ((3, 1), (4, 2), (5, 2)),
                            trials: int = 100, seed: int = 0, scale: float = 1.0,
                            tol: float = 1e-9) -> dict:
    """Composition, chain rule, Bergman covariance and the A_0 Jacobian on random draws."""
    report = {"trials": trials, "seed": seed, "tol": tol, "cases": []}
    for n, m in pairs:
        worst = {"composition": 0.0, "chain_rule": 0.0, "bergman": 0.0, "a0_jacobian": 0.0,
                 "form_defect": 0.0}
        for t in range(trials):
            base = seed * 1_000_003 + 1000 * n + 10 * m + 7 * t
            g1 = sample_group(n, m, "SU", scale, base)
            g2 = sample_group(n, m, "SU" if t % 2 else "SO", scale, base + 1)
            z = sample_domain_point(n, m, base + 2)
            w = sample_domain_point(n, m, base + 3)
            worst["form_defect"] = max(worst["form_defect"], g1.form_defect(), g2.form_defect())
            lhs = mobius_action(g1 @ g2, z).z
            rhs = mobius_action(g1, mobius_action(g2, z)).z
            worst["composition"] = max(worst["composition"], float(np.max(np.abs(lhs - rhs))))
            j12 = jacobian(g1 @ g2, z)
            chain = jacobian(g1, mobius_action(g2, z)) * jacobian(g2, z)
            worst["chain_rule"] = max(worst["chain_rule"], _rel(j12, chain))
            gz, gw = mobius_action(g1, z), mobius_action(g1, w)
            k_lhs = bergman_kernel(gz, gw)
            k_rhs = bergman_kernel(z, w) / (jacobian(g1, z) * np.conj(jacobian(g1, w)))
            worst["bergman"] = max(worst["bergman"], _rel(k_lhs, k_rhs))
            tt = float(np.random.default_rng(base + 4).uniform(-2, 2))
            ja = jacobian(a0_element(n, m, tt), shilov_base(n, m))
            worst["a0_jacobian"] = max(worst["a0_jacobian"], _rel(ja, math.exp(-(n + m) * m * tt)))
        case = {"n": n, "m": m, **worst}
        case["pass"] = all(v <= tol for k, v in worst.items() if k != "form_defect") and worst["form_defect"] <= 1e-10
        report["cases"].append(case)
    report["pass"] = all(c["pass"] for c in report["cases"])
    return report
