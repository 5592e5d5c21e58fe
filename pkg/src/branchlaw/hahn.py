"""Continuous dual Hahn polynomials at the parameter slice of the branching problem.

Everything is written in the squared spectral variable ``y = x**2`` so the
discrete points ``y = -(c+j)**2`` need no complex arithmetic: the Pochhammer
pair (a+ix)_j (a-ix)_j is the real product prod_{l<j} ((a+l)**2 + y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Union

import numpy as np

from .exact_core import pochhammer, rational_to_str
from .special import log_gamma_real


@dataclass(frozen=True)
class HahnParams:
    n: int
    m: int
    a: Fraction
    b: Fraction
    c: Fraction

    @property
    def has_atoms(self) -> bool:
        return self.c < 0

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "a": rational_to_str(self.a),
                "b": rational_to_str(self.b), "c": rational_to_str(self.c)}


def hahn_params(n: int, m: int) -> HahnParams:
    if not n >= m >= 1:
        raise ValueError(f"need n >= m >= 1, got n={n}, m={m}")
    q = Fraction(n - m, 4)
    return HahnParams(n, m, Fraction(m - 1, 2) + q, Fraction(1, 2) + q, Fraction(1, 2) - q)


@dataclass(frozen=True)
class SpectralValue:
    """A point of the spectrum, carried by its squared coordinate y."""

    y: Union[Fraction, float]
    kind: Literal["continuous", "discrete"] = "continuous"
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind == "discrete" and (self.j is None or self.j < 0):
            raise ValueError("discrete spectral values need j >= 0")
        if self.kind == "continuous" and self.y <= 0:
            raise ValueError("continuous spectral values have y = x^2 > 0")

    @classmethod
    def continuous(cls, x: float) -> "SpectralValue":
        return cls(float(x) ** 2)

    @classmethod
    def discrete(cls, p: HahnParams, j: int) -> "SpectralValue":
        if not p.c + j < 0:
            raise ValueError(f"c + j = {p.c + j} is not negative; no discrete point")
        return cls(-(p.c + j) ** 2, "discrete", j)


def _y(y):
    return y.y if isinstance(y, SpectralValue) else y


def _is_exact(y) -> bool:
    return isinstance(y, (int, Fraction)) and not isinstance(y, bool)


def hahn_S_coeffs(k: int, p: HahnParams) -> list[Fraction]:
    """Exact coefficients of S_k(y; a, b, c) in ascending powers of y."""
    if k < 0:
        raise ValueError("k >= 0 required")
    a, ab, ac = p.a, p.a + p.b, p.a + p.c
    norm = pochhammer(ab, k) * pochhammer(ac, k)
    total = [Fraction(0)] * (k + 1)
    prod = [Fraction(1)]  # prod_{l<j} ((a+l)^2 + y)
    for j in range(k + 1):
        w = norm * pochhammer(-k, j) / (pochhammer(ab, j) * pochhammer(ac, j) * math.factorial(j))
        for i, cf in enumerate(prod):
            total[i] += w * cf
        shift = (a + j) ** 2
        nxt = [Fraction(0)] * (len(prod) + 1)
        for i, cf in enumerate(prod):
            nxt[i] += shift * cf
            nxt[i + 1] += cf
        prod = nxt
    return total


def hahn_S(k: int, y, p: HahnParams):
    """S_k(y) from the terminating 3F2 sum; exact when y is rational."""
    y = _y(y)
    if k < 0:
        raise ValueError("k >= 0 required")
    a, ab, ac = p.a, p.a + p.b, p.a + p.c
    if not _is_exact(y):
        a, ab, ac = float(a), float(ab), float(ac)
        y = np.asarray(y, dtype=float)
    total = 0
    prod = 1
    term_scale = 1
    for j in range(k + 1):
        if j:
            term_scale = term_scale * (-k + j - 1) / ((ab + j - 1) * (ac + j - 1) * j)
            prod = prod * ((a + j - 1) ** 2 + y)
        total = total + term_scale * prod
    if _is_exact(y):
        return total * pochhammer(p.a + p.b, k) * pochhammer(p.a + p.c, k)
    return total * float(pochhammer(p.a + p.b, k) * pochhammer(p.a + p.c, k))


def stilde(k: int, y, p: HahnParams):
    """S_k(y) / ((a+b)_k (a+c)_k), the 3F2 itself."""
    val = hahn_S(k, y, p)
    scale = pochhammer(p.a + p.b, k) * pochhammer(p.a + p.c, k)
    return val / scale if _is_exact(_y(y)) else val / float(scale)


def primed_coeffs(k: int, p: HahnParams) -> tuple[Fraction, Fraction, Fraction]:
    """(A'_k, B'_k, C'_k) of the normalized three-term recurrence."""
    A = k * (k + p.b + p.c - 1)
    C = (k + p.a + p.b) * (k + p.a + p.c)
    return Fraction(A), -(A + C), C


def hahn_recurrence_next(k: int, y, p: HahnParams, s_k, s_km1):
    """Solve -(a^2+y) S~_k = A'_k S~_{k-1} + B'_k S~_k + C'_k S~_{k+1} for S~_{k+1}."""
    y = _y(y)
    A, B, C = primed_coeffs(k, p)
    if C == 0:
        raise ZeroDivisionError("C'_k vanished")
    if k == 0:
        s_km1 = 0
    if _is_exact(y) and all(_is_exact(v) for v in (s_k, s_km1)):
        return (-(p.a**2 + y) * s_k - A * s_km1 - B * s_k) / C
    return (-(float(p.a) ** 2 + y) * s_k - float(A) * s_km1 - float(B) * s_k) / float(C)


def stilde_family(y, p: HahnParams, k_max: int) -> np.ndarray:
    """S~_0..S~_{k_max} on an array of y by the recurrence, shape (k_max+1, *y.shape)."""
    y = np.asarray(y, dtype=float)
    out = np.empty((k_max + 1,) + y.shape)
    out[0] = 1.0
    prev = np.zeros_like(y)
    for k in range(k_max):
        out[k + 1] = hahn_recurrence_next(k, y, p, out[k], prev)
        prev = out[k]
    return out


def alpha_sq(n: int, m: int, k: int) -> Fraction:
    """Gamma-free squared renormalization: alpha_k^2 Gamma(m/2) Gamma(n/2) = 16^k ((m/2)_k (n/2)_k)^2."""
    return Fraction(16) ** k * (pochhammer(Fraction(m, 2), k) * pochhammer(Fraction(n, 2), k)) ** 2


def log_alpha(n: int, m: int, k: int) -> float:
    log_a0 = -0.5 * (log_gamma_real(m / 2) + log_gamma_real(n / 2))
    return log_a0 + 0.5 * math.log(alpha_sq(n, m, k))


def alpha(n: int, m: int, k: int) -> float:
    """alpha_k = (Gamma(m/2) Gamma(n/2))^{-1/2} 4^k (m/2)_k (n/2)_k."""
    return math.exp(log_alpha(n, m, k))


def stilde_alpha(k: int, y, p: HahnParams):
    """alpha_k S~_k(y): the image of psi_k under the unitary transform."""
    return alpha(p.n, p.m, k) * stilde(k, _y(y) if _is_exact(_y(y)) else np.asarray(_y(y), float), p)


def alpha_family(p: HahnParams, k_max: int) -> np.ndarray:
    return np.array([alpha(p.n, p.m, k) for k in range(k_max + 1)])


def polynomial_json(k: int, p: HahnParams) -> dict:
    """Coefficient lists in y of S_k, S~_k and alpha_k S~_k for serialization."""
    s = hahn_S_coeffs(k, p)
    scale = pochhammer(p.a + p.b, k) * pochhammer(p.a + p.c, k)
    st = [cf / scale for cf in s]
    return {
        "k": k,
        "S": [rational_to_str(cf) for cf in s],
        "S_tilde": [rational_to_str(cf) for cf in st],
        "S_tilde_alpha": {
            "coeffs_over_alpha": [rational_to_str(cf) for cf in st],
            "alpha_sq_times_gamma": rational_to_str(alpha_sq(p.n, p.m, k)),
            "alpha": alpha(p.n, p.m, k),
        },
    }
