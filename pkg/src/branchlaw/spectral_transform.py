"""The unitary map from L-invariants to L^2 of the spectral measure.

The basis correspondence is psi_k -> alpha_k S~_k.  In orthonormal coordinates
phi_k = psi_k / ||psi_k|| this sends phi_k to

    u_k(y) = alpha_k S~_k(y) / sqrt(N_k) = alpha_0 sqrt((m/2)_k (n/2)_k) / k! * S~_k(y),

with N_k = psi_norm_sq(n, m, k).  The radial operator becomes multiplication by
-(a^2 + y), whose matrix in the u_k basis is the symmetric tridiagonal matrix
with diagonal B_k and off-diagonal sqrt(A_{k+1} C_k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exact_core import pochhammer, rational_to_str
from .hahn import HahnParams, hahn_params, log_alpha, stilde_family
from .plancherel import PlancherelMeasure, SpectralFunction, gram_matrix, multiplication_symbol
from .radial_ops import jacobi_coeffs


@dataclass(frozen=True)
class CoefficientVector:
    """Coordinates of an L-invariant in the orthonormal basis phi_0, phi_1, ..."""

    n: int
    m: int
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if not self.n >= self.m >= 1:
            raise ValueError("need n >= m >= 1")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def norm_sq(self) -> float:
        return math.fsum(c * c for c in self.coeffs)

    @classmethod
    def basis(cls, n: int, m: int, k: int, dim: Optional[int] = None) -> "CoefficientVector":
        dim = k + 1 if dim is None else dim
        return cls(n, m, tuple(1.0 if i == k else 0.0 for i in range(dim)))


def unit_scales(p: HahnParams, k_max: int) -> np.ndarray:
    """alpha_k / sqrt(N_k) for k = 0..k_max, computed in log space."""
    out = []
    for k in range(k_max + 1):
        poch = pochhammer(Fraction(p.m, 2), k) * pochhammer(Fraction(p.n, 2), k)
        out.append(math.exp(log_alpha(p.n, p.m, 0) + 0.5 * math.log(poch) - math.lgamma(k + 1)))
    return np.array(out)


def unit_family(y, p: HahnParams, k_max: int) -> np.ndarray:
    """u_0..u_{k_max} at y, shape (k_max+1, N)."""
    fam = stilde_family(y, p, k_max)
    return fam * unit_scales(p, k_max).reshape((-1,) + (1,) * (fam.ndim - 1))


def transform(v: CoefficientVector) -> SpectralFunction:
    """Image of sum_k v_k phi_k as a function on the spectrum."""
    p = hahn_params(v.n, v.m)
    coeffs = np.array(v.coeffs)
    if coeffs.size == 0:
        return SpectralFunction(lambda y: np.zeros(np.shape(y)), 0, {"coeffs": []})
    k_max = len(coeffs) - 1

    def fn(y):
        return coeffs @ unit_family(y, p, k_max)

    return SpectralFunction(fn, k_max, {"coeffs": list(v.coeffs), "n": v.n, "m": v.m})


def transform_norm_sq(v: CoefficientVector, mu: Optional[PlancherelMeasure] = None) -> float:
    f = transform(v)
    mu = mu or PlancherelMeasure.of(v.n, v.m)
    sq = SpectralFunction(lambda y: f.fn(y) ** 2, 2 * (f.degree or 0))
    return mu.integrate(sq)


def unit_gram(mu: PlancherelMeasure, k_max: int) -> np.ndarray:
    return gram_matrix(mu, lambda y: unit_family(y, mu.params, k_max), k_max + 1, 2 * k_max)


def verify_unitarity(n: int, m: int, k_max: int, tol: float = 1e-7,
                     mu: Optional[PlancherelMeasure] = None) -> dict:
    """Gram matrix of u_0..u_{k_max} against the identity."""
    mu = mu or PlancherelMeasure.of(n, m)
    G = unit_gram(mu, k_max)
    dev = float(np.max(np.abs(G - np.eye(k_max + 1))))
    return {"n": n, "m": m, "k_max": k_max, "tol": tol, "max_deviation": dev, "pass": dev <= tol}


def parseval_check(v: CoefficientVector, tol: float = 1e-7,
                   mu: Optional[PlancherelMeasure] = None) -> dict:
    lhs = transform_norm_sq(v, mu)
    rhs = v.norm_sq
    rel = abs(lhs - rhs) / rhs if rhs else abs(lhs)
    return {"transform_norm_sq": lhs, "coeff_norm_sq": rhs, "rel_error": rel, "pass": rel <= tol}


def operator_matrix(n: int, m: int, k_max: int, mu: Optional[PlancherelMeasure] = None) -> np.ndarray:
    """M_lk = integral of -(a^2+y) u_k u_l, assembled by quadrature."""
    mu = mu or PlancherelMeasure.of(n, m)
    p = mu.params

    def fn(y):
        u = unit_family(y, p, k_max)
        return np.einsum("n,kn,ln->nkl", multiplication_symbol(y, p), u, u)

    return mu.integrate(SpectralFunction(fn, 2 * k_max + 1))


def expected_operator_matrix(n: int, m: int, k_max: int) -> np.ndarray:
    """Tridiagonal matrix from the exact recurrence coefficients."""
    M = np.zeros((k_max + 1, k_max + 1))
    for k in range(k_max + 1):
        M[k, k] = float(jacobi_coeffs(n, m, k).B)
        if k < k_max:
            off = math.sqrt(jacobi_coeffs(n, m, k + 1).A * jacobi_coeffs(n, m, k).C)
            M[k, k + 1] = M[k + 1, k] = off
    return M


def verify_operator_matrix(n: int, m: int, k_max: int, tol: float = 1e-7,
                           mu: Optional[PlancherelMeasure] = None) -> dict:
    M = operator_matrix(n, m, k_max, mu)
    E = expected_operator_matrix(n, m, k_max)
    scale = float(np.max(np.abs(np.diag(M))))
    band = np.abs(np.subtract.outer(np.arange(k_max + 1), np.arange(k_max + 1))) >= 2
    tri = float(np.max(np.abs(M[band]), initial=0.0)) / scale
    asym = float(np.max(np.abs(M - M.T))) / scale
    match = float(np.max(np.abs(M - E))) / scale
    return {
        "n": n, "m": m, "k_max": k_max, "tol": tol,
        "offband_over_scale": tri, "asymmetry_over_scale": asym, "vs_exact_over_scale": match,
        "M00": float(M[0, 0]),
        "pass": tri <= tol and asym <= tol and match <= tol,
    }


def branching_summary(n: int, m: int) -> dict:
    """Continuous band plus discrete points, with masses and Casimir values."""
    mu = PlancherelMeasure.of(n, m)
    p = mu.params
    discrete = []
    for at in mu.atoms:
        discrete.append({
            "j": at.j,
            "parameter": f"i*({rational_to_str(p.c + at.j)})",
            "y": rational_to_str(at.y),
            "y_float": float(at.y),
            "mass": at.mass,
            "casimir": rational_to_str(at.casimir),
            "casimir_float": float(at.casimir),
        })
    return {
        "n": n,
        "m": m,
        "params": p.to_json(),
        "continuous": {"support": "(0, inf)", "variable": "x, with y = x^2",
                       "density": "branchlaw.plancherel.density", "X_max": mu.X_max},
        "atoms": discrete,
        "total_mass": mu.total_mass,
        "total_mass_expr": f"Gamma({rational_to_str(Fraction(n, 2))})*Gamma({rational_to_str(Fraction(m, 2))})",
    }


def random_coefficients(n: int, m: int, dim: int, rng: np.random.Generator) -> CoefficientVector:
    return CoefficientVector(n, m, tuple(rng.standard_normal(dim)))


def coefficients_from(n: int, m: int, values: Sequence[float]) -> CoefficientVector:
    return CoefficientVector(n, m, tuple(values))
