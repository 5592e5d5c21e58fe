"""The spectral measure: gamma-function density on (0, inf) plus finitely many atoms.

The continuous part lives on y = x**2 with weight

    density(x) = |Gamma(a+ix) Gamma(b+ix) Gamma(c+ix) / Gamma(2ix)|**2 / (2 pi)

and for c < 0 there is an atom at y_j = -(c+j)**2 for every j with c + j < 0.
Integrals are taken over x in (0, X_max] by adaptive Gauss-Legendre, where
X_max comes from a Stirling tail bound for a given polynomial degree budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Optional

import numpy as np

from .exact_core import pochhammer, rational_to_str
from .hahn import HahnParams, SpectralValue, hahn_params, stilde_family
from .quadrature import QuadratureSpec, integrate_interval
from .special import PoleError, log_gamma, log_gamma_real

__all__ = [
    "Atom", "PlancherelMeasure", "SpectralFunction", "PoleError",
    "log_gamma", "density", "atoms", "integrate", "multiplication_symbol",
    "verify_orthogonality", "hahn_S_family", "gram_matrix",
]


def density(x, p: HahnParams):
    """Continuous weight at x > 0 (vectorized)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("density is defined for x > 0 only")
    ix = 1j * x
    lg = (log_gamma(float(p.a) + ix) + log_gamma(float(p.b) + ix)
          + log_gamma(float(p.c) + ix) - log_gamma(2 * ix))
    return np.exp(2 * lg.real) / (2 * math.pi)


def tail_exponent(p: HahnParams) -> float:
    """q with density(x) ~ 4 pi x**q exp(-pi x) as x -> inf."""
    return float(2 * (p.a + p.b + p.c) - 2)


@dataclass(frozen=True)
class Atom:
    j: int
    y: Fraction
    mass: float
    casimir: Fraction

    def to_json(self) -> dict:
        return {"j": self.j, "y": rational_to_str(self.y), "mass": self.mass,
                "casimir": rational_to_str(self.casimir)}


def multiplication_symbol(y, p: HahnParams):
    """-(a^2 + y): the spectral image of the radial operator."""
    y = y.y if isinstance(y, SpectralValue) else y
    if isinstance(y, (int, Fraction)):
        return -(p.a**2 + y)
    return -(float(p.a) ** 2 + np.asarray(y, dtype=float))


def _log_abs(q: Fraction) -> float:
    return math.log(abs(q.numerator)) - math.log(q.denominator)


def atoms(p: HahnParams) -> list[Atom]:
    """Point masses at y_j = -(c+j)^2 for every j >= 0 with c + j < 0.

    The j-dependent factor (2c)_j (c+1)_j (c+b)_j (c+a)_j / ((c)_j (c-b+1)_j
    (c-a+1)_j j!) (-1)^j is exact; the gamma prefactor has positive arguments
    whenever c < 0, so the mass is assembled in log space.
    """
    a, b, c = p.a, p.b, p.c
    if c >= 0:
        return []
    log_pref = (log_gamma_real(float(a + c)) + log_gamma_real(float(c + b))
                + log_gamma_real(float(b - c)) + log_gamma_real(float(a - c))
                - log_gamma_real(float(-2 * c)))
    out = []
    j = 0
    while c + j < 0:
        ratio = (pochhammer(2 * c, j) * pochhammer(c + 1, j) * pochhammer(c + b, j) * pochhammer(c + a, j)
                 / (pochhammer(c, j) * pochhammer(c - b + 1, j) * pochhammer(c - a + 1, j) * math.factorial(j)))
        ratio *= (-1) ** j
        if ratio <= 0:
            raise ArithmeticError(f"atom {j} has nonpositive mass factor {ratio}")
        y = -(c + j) ** 2
        out.append(Atom(j, y, math.exp(log_pref + _log_abs(ratio)), multiplication_symbol(y, p)))
        j += 1
    return out


@dataclass(frozen=True)
class SpectralFunction:
    """A function on the spectrum, vectorized in the squared variable y.

    ``fn`` maps an (N,) float array of y values to an (N, ...) array.  ``degree``
    is the polynomial degree in y when known; it sets the truncation point.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    degree: Optional[int] = None
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    def __call__(self, v):
        if isinstance(v, SpectralValue):
            return self.fn(np.array([float(v.y)]))[0]
        return self.fn(np.asarray(v, dtype=float))


@dataclass(frozen=True)
class IntegralReport:
    value: np.ndarray
    continuous: np.ndarray
    atomic: np.ndarray
    error: np.ndarray
    x_max: float
    panels: int


@dataclass(frozen=True)
class PlancherelMeasure:
    params: HahnParams
    quad: QuadratureSpec = QuadratureSpec()
    tail_tol: float = 1e-14
    degree_budget: int = 16
    atoms: tuple[Atom, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(atoms(self.params)))

    @classmethod
    def of(cls, n: int, m: int, **kw) -> "PlancherelMeasure":
        return cls(hahn_params(n, m), **kw)

    def density(self, x):
        return density(x, self.params)

    @property
    def total_mass(self) -> float:
        return math.exp(log_gamma_real(self.params.n / 2) + log_gamma_real(self.params.m / 2))

    @property
    def X_max(self) -> float:
        return self.truncation(self.degree_budget)

    def truncation(self, degree: Optional[int] = None) -> float:
        d = self.degree_budget if degree is None else degree
        return _truncation(self.params, d, self.tail_tol)

    def integrate_detailed(self, f: SpectralFunction) -> IntegralReport:
        x_max = self.truncation(f.degree)

        def g(x):
            vals = np.asarray(f.fn(x * x), dtype=float)
            w = self.density(x)
            return vals * w.reshape(w.shape + (1,) * (vals.ndim - 1))

        res = integrate_interval(g, 0.0, x_max, self.quad)
        cont = res.value
        if self.atoms:
            ys = np.array([float(at.y) for at in self.atoms])
            vals = np.asarray(f.fn(ys), dtype=float)
            masses = np.array([at.mass for at in self.atoms])
            terms = vals * masses.reshape((-1,) + (1,) * (vals.ndim - 1))
            flat = terms.reshape(len(self.atoms), -1)
            atomic = np.array([math.fsum(col) for col in flat.T]).reshape(terms.shape[1:])
        else:
            atomic = np.zeros_like(cont)
        flat = np.stack([cont, atomic]).reshape(2, -1)
        total = np.array([math.fsum(col) for col in flat.T]).reshape(cont.shape)
        return IntegralReport(total, cont, atomic, res.error, x_max, res.panels)

    def integrate(self, f: SpectralFunction):
        val = self.integrate_detailed(f).value
        return float(val) if val.ndim == 0 else val

    def to_json(self) -> dict:
        return {"params": self.params.to_json(), "atoms": [a.to_json() for a in self.atoms],
                "X_max": self.X_max, "total_mass": self.total_mass}


@lru_cache(maxsize=None)
def _truncation(p: HahnParams, degree: int, tail_tol: float) -> float:
    """Smallest integer X whose tail bound is below tail_tol/10 of the envelope mass.

    The envelope is density(x) (1 + x^2)^degree.  Past X its log-derivative is at
    most (q + 2 degree)/X - pi, so the tail is at most envelope(X) / (pi - p/X);
    a safety factor of 10 covers the subleading Stirling terms.
    """
    pexp = tail_exponent(p) + 2 * degree
    x0 = max(8.0, math.ceil(2 * max(pexp, 0.0) / math.pi) + 4.0)
    lo = 1e-6
    grid = np.linspace(lo, x0, 4001)
    env0 = density(grid, p) * (1 + grid**2) ** degree
    mass = float(np.sum(0.5 * (env0[1:] + env0[:-1]) * np.diff(grid)))
    x = x0
    while True:
        env = float(density(x, p)) * (1 + x * x) ** degree
        tail = 10.0 * env / (math.pi - pexp / x)
        if tail <= tail_tol / 10 * mass:
            return float(x)
        x += 1.0
        if x > 2000:
            raise RuntimeError("tail bound not reached")


def integrate(f: SpectralFunction, mu: PlancherelMeasure):
    return mu.integrate(f)


def hahn_S_family(y, p: HahnParams, k_max: int) -> np.ndarray:
    """Float S_0..S_{k_max} at y via the normalized recurrence, shape (k_max+1, N)."""
    fam = stilde_family(y, p, k_max)
    scale = np.array([float(pochhammer(p.a + p.b, k) * pochhammer(p.a + p.c, k)) for k in range(k_max + 1)])
    return fam * scale.reshape((-1,) + (1,) * (fam.ndim - 1))


def gram_matrix(mu: PlancherelMeasure, basis: Callable[[np.ndarray], np.ndarray], size: int, degree: int):
    """G_kl = integral of basis_k basis_l, with ``basis`` returning shape (size, N)."""

    def fn(y):
        b = basis(y)
        return np.einsum("kn,ln->nkl", b, b)

    return mu.integrate(SpectralFunction(fn, degree))


def orthogonality_norms(n: int, m: int, k_max: int) -> np.ndarray:
    """Gamma(k+n/2) Gamma(k+m/2) (k!)^2 for k = 0..k_max."""
    return np.array([
        math.exp(log_gamma_real(k + n / 2) + log_gamma_real(k + m / 2) + 2 * math.lgamma(k + 1))
        for k in range(k_max + 1)
    ])


def verify_orthogonality(n: int, m: int, k_max: int, tol: float = 1e-8,
                         mu: Optional[PlancherelMeasure] = None) -> dict:
    """Gram matrix of S_0..S_{k_max} against the closed-form diagonal."""
    mu = mu or PlancherelMeasure.of(n, m)
    p = mu.params
    G = gram_matrix(mu, lambda y: hahn_S_family(y, p, k_max), k_max + 1, 2 * k_max)
    expect = orthogonality_norms(n, m, k_max)
    diag_err = np.abs(np.diag(G) - expect) / expect
    scale = np.sqrt(np.outer(expect, expect))
    off = np.abs(G - np.diag(np.diag(G))) / scale
    report = {
        "n": n, "m": m, "k_max": k_max, "tol": tol,
        "max_diag_rel_error": float(diag_err.max()),
        "max_offdiag_scaled": float(off.max()),
        "diag": [float(v) for v in np.diag(G)],
        "expected_diag": [float(v) for v in expect],
        "n_atoms": len(mu.atoms),
    }
    report["pass"] = report["max_diag_rel_error"] <= tol and report["max_offdiag_scaled"] <= tol
    return report


def density_table(p: HahnParams, x_min: float, x_max: float, steps: int) -> np.ndarray:
    """(steps, 2) array of x and density(x) on an even grid."""
    if not 0 < x_min < x_max or steps < 2:
        raise ValueError("need 0 < x_min < x_max and steps >= 2")
    x = np.linspace(x_min, x_max, steps)
    return np.column_stack([x, density(x, p)])
