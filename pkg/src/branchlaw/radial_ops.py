"""Exact action of the radial Casimir operator on even symmetric polynomials.

Four times the radial operator splits as ``L_minus + L_zero + L_plus`` (degree
lowering, preserving and raising).  In the flat coordinates x_i:

    L_minus = sum_i (d_i^2 + (n-m)/x_i d_i) + 2 sum_{i>j} D_ij
    L_zero  = -mn + sum_i ((-4-(n-m)) x_i d_i - 2 x_i^2 d_i^2)
              - 2 sum_{i>j} (x_i^2 + x_j^2) D_ij
    L_plus  = sum_i (2 x_i^2 + 4 x_i^3 d_i + x_i^4 d_i^2) + 2 sum_{i>j} x_i^2 x_j^2 D_ij

with ``D_ij = (x_i d_i - x_j d_j) / (x_i^2 - x_j^2)``.  ``D_ij`` is evaluated on
symmetric input through the geometric-sum identity

    D_ij (x_i^{2c} x_j^{2d} + x_i^{2d} x_j^{2c})
        = 2(c-d) (x_i x_j)^{2d} sum_{r=0}^{c-d-1} x_i^{2r} x_j^{2(c-d-1-r)},

so no rational functions ever appear.  The sign of the ``L_zero`` cross term is
the one obtained by expanding the operator in x-coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact_core import rational_to_str
from .sympoly import EvenSymPoly, Monomials, NotSymmetricError, build_psi


class CancellationError(ArithmeticError):
    """An operator image failed to be a symmetric polynomial."""


def _add(out: Monomials, beta: tuple[int, ...], c) -> None:
    if c:
        out[beta] = out.get(beta, Fraction(0)) + c


def _cross(monos: Monomials, i: int, j: int, shift: tuple[int, int] = (0, 0)) -> Monomials:
    """x_i^{2s} x_j^{2t} D_ij applied to a monomial map symmetric in (i, j)."""
    out: Monomials = {}
    si, sj = shift
    for beta, c in monos.items():
        bi, bj = beta[i], beta[j]
        p = abs(bi - bj)
        if p == 0:
            continue
        lo = min(bi, bj)
        # each monomial of a swap pair carries half the pair's image
        for r in range(p):
            new = list(beta)
            new[i] = lo + r + si
            new[j] = lo + p - 1 - r + sj
            _add(out, tuple(new), p * c)
    return out


def _collapse(m: int, monos: Monomials) -> EvenSymPoly:
    try:
        return EvenSymPoly.from_monomials(m, monos)
    except NotSymmetricError as exc:
        raise CancellationError(str(exc)) from exc


def _pairs(m: int):
    return [(i, j) for i in range(m) for j in range(i)]


def _check(p: EvenSymPoly, n: int) -> None:
    if not isinstance(p, EvenSymPoly):
        raise TypeError("expected an EvenSymPoly")
    if n < p.m:
        raise ValueError(f"need n >= m, got n={n}, m={p.m}")


def apply_L_minus(p: EvenSymPoly, n: int) -> EvenSymPoly:
    _check(p, n)
    m = p.m
    monos = p.to_monomials()
    out: Monomials = {}
    for beta, c in monos.items():
        for i, b in enumerate(beta):
            if b:
                new = beta[:i] + (b - 1,) + beta[i + 1:]
                _add(out, new, 2 * b * (2 * b - 1 + n - m) * c)
    for i, j in _pairs(m):
        for beta, c in _cross(monos, i, j).items():
            _add(out, beta, 2 * c)
    return _collapse(m, out)


def apply_L_zero(p: EvenSymPoly, n: int) -> EvenSymPoly:
    _check(p, n)
    m = p.m
    monos = p.to_monomials()
    out: Monomials = {}
    for beta, c in monos.items():
        diag = -m * n + sum((-4 - (n - m)) * 2 * b - 4 * b * (2 * b - 1) for b in beta)
        _add(out, beta, diag * c)
    for i, j in _pairs(m):
        for shift in ((1, 0), (0, 1)):
            for beta, c in _cross(monos, i, j, shift).items():
                _add(out, beta, -2 * c)
    return _collapse(m, out)


def apply_L_plus(p: EvenSymPoly, n: int) -> EvenSymPoly:
    _check(p, n)
    m = p.m
    monos = p.to_monomials()
    out: Monomials = {}
    for beta, c in monos.items():
        for i, b in enumerate(beta):
            new = beta[:i] + (b + 1,) + beta[i + 1:]
            _add(out, new, (2 * b + 1) * (2 * b + 2) * c)
    for i, j in _pairs(m):
        for beta, c in _cross(monos, i, j, (1, 1)).items():
            _add(out, beta, 2 * c)
    return _collapse(m, out)


def apply_L1(p: EvenSymPoly, n: int) -> EvenSymPoly:
    """The radial Casimir operator: one quarter of L_minus + L_zero + L_plus."""
    return (apply_L_minus(p, n) + apply_L_zero(p, n) + apply_L_plus(p, n)).scale(Fraction(1, 4))


@dataclass(frozen=True)
class JacobiCoeffs:
    """Three-term coefficients on {psi_k} and on the normalized Hahn family."""

    n: int
    m: int
    k: int
    A: Fraction
    B: Fraction
    C: Fraction
    A_p: Fraction
    B_p: Fraction
    C_p: Fraction

    @property
    def A_factored(self) -> Fraction:
        k, n, m = self.k, self.n, self.m
        return 4 * k**2 * (k - 1 + Fraction(n, 2)) * (k - 1 + Fraction(m, 2))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            **{name: rational_to_str(getattr(self, name)) for name in ("A", "B", "C", "A_p", "B_p", "C_p")},
            "float": {name: float(getattr(self, name)) for name in ("A", "B", "C", "A_p", "B_p", "C_p")},
        }


def jacobi_coeffs(n: int, m: int, k: int) -> JacobiCoeffs:
    if not n >= m >= 1 or k < 0:
        raise ValueError("need n >= m >= 1 and k >= 0")
    A = 4 * k**4 + (4 * (m - 2) + 2 * (n - m)) * k**3 + ((m * m - 4 * m + 4) + (n - m) * (m - 2)) * k**2
    B = -2 * k**2 - Fraction(n + m, 2) * k - Fraction(m * n, 4)
    C = Fraction(1, 4)
    # a + b = n/2, a + c = m/2, b + c = 1
    A_p = Fraction(k * k)
    C_p = (k + Fraction(n, 2)) * (k + Fraction(m, 2))
    return JacobiCoeffs(n, m, k, Fraction(A), B, C, A_p, -(A_p + C_p), C_p)


@lru_cache(maxsize=None)
def _psi(m: int, k: int) -> EvenSymPoly:
    return build_psi(m, k)


def _first_difference(lhs: EvenSymPoly, rhs: EvenSymPoly) -> str:
    for lam in sorted(set(lhs.terms) | set(rhs.terms), reverse=True):
        if lhs[lam] != rhs[lam]:
            return (
                f"orbit {list(lam)}: operator gives {rational_to_str(lhs[lam])}, "
                f"recurrence gives {rational_to_str(rhs[lam])}"
            )
    return ""


def recurrence_sides(n: int, m: int, k: int) -> tuple[EvenSymPoly, EvenSymPoly]:
    """(apply_L1(psi_k), A_k psi_{k-1} + B_k psi_k + C_k psi_{k+1})."""
    jc = jacobi_coeffs(n, m, k)
    rhs = _psi(m, k).scale(jc.B) + _psi(m, k + 1).scale(jc.C)
    if k > 0:
        rhs = rhs + _psi(m, k - 1).scale(jc.A)
    return apply_L1(_psi(m, k), n), rhs


def verify_recurrence(n: int, m: int, k_max: int) -> dict:
    """Check the exact Jacobi identity for k = 0..k_max; failures are report content."""
    results = []
    for k in range(k_max + 1):
        lhs, rhs = recurrence_sides(n, m, k)
        ok = lhs == rhs
        results.append({"k": k, "pass": ok, "detail": "exact" if ok else _first_difference(lhs, rhs)})
    return {"n": n, "m": m, "results": results, "pass": all(r["pass"] for r in results)}


def invariant_product_holds(n: int, m: int, k: int) -> bool:
    """A_{k+1} C_k == A'_{k+1} C'_k exactly."""
    nxt, cur = jacobi_coeffs(n, m, k + 1), jacobi_coeffs(n, m, k)
    return nxt.A * cur.C == nxt.A_p * cur.C_p


def symmetric_offdiag(n: int, m: int, k: int) -> float:
    """sqrt(A_{k+1} C_k), the (k, k+1) entry of the operator in an orthonormal basis."""
    return float(jacobi_coeffs(n, m, k + 1).A * jacobi_coeffs(n, m, k).C) ** 0.5
