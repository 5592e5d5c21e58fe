"""Even symmetric polynomials in m variables, stored one coefficient per orbit.

An entry ``(lam, c)`` of :attr:`EvenSymPoly.terms` stands for
``c * sum_sigma x**(2*sigma)`` where sigma runs over the distinct permutations of
the partition ``lam``.  Exponents are therefore always in the squared variables.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact_core import (
    Partition,
    as_rational,
    canonical_partition,
    distinct_permutations,
    even_factorial,
    multinomial,
    partitions_of,
    pochhammer,
    rational_from_str,
    rational_to_str,
)

Monomials = dict[tuple[int, ...], Fraction]


class NotSymmetricError(ValueError):
    """A monomial map failed to be invariant under permutations of variables."""


class EvenSymPoly:
    """Immutable even symmetric polynomial with exact rational coefficients."""

    __slots__ = ("_m", "_terms")

    def __init__(self, m: int, terms: Mapping[Sequence[int], object] | None = None):
        if m < 1:
            raise ValueError("need at least one variable")
        clean: dict[Partition, Fraction] = {}
        for lam, c in (terms or {}).items():
            lam = tuple(int(v) for v in lam)
            if len(lam) != m or any(v < 0 for v in lam) or any(
                lam[i] < lam[i + 1] for i in range(m - 1)
            ):
                raise ValueError(f"{lam} is not a length-{m} partition")
            c = as_rational(c)
            if c:
                clean[lam] = clean.get(lam, Fraction(0)) + c
        self._m = m
        self._terms = {lam: c for lam, c in sorted(clean.items(), reverse=True) if c}

    @property
    def m(self) -> int:
        return self._m

    @property
    def terms(self) -> dict[Partition, Fraction]:
        return dict(self._terms)

    def __getitem__(self, lam: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(lam), Fraction(0))

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EvenSymPoly):
            return NotImplemented
        return self._m == other._m and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._m, tuple(self._terms.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{lam}: {rational_to_str(c)}" for lam, c in self._terms.items())
        return f"EvenSymPoly(m={self._m}, {{{body}}})"

    @property
    def degree(self) -> int:
        """Total degree in the original variables (twice the partition weight)."""
        if not self._terms:
            return -1
        return 2 * max(sum(lam) for lam in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(lam) for lam in self._terms}) <= 1

    def homogeneous_part(self, weight: int) -> "EvenSymPoly":
        return EvenSymPoly(self._m, {lam: c for lam, c in self._terms.items() if sum(lam) == weight})

    # -- ring operations -------------------------------------------------

    def _check_same(self, other: "EvenSymPoly") -> None:
        if not isinstance(other, EvenSymPoly):
            raise TypeError("expected an EvenSymPoly")
        if other._m != self._m:
            raise ValueError(f"variable counts differ: {self._m} vs {other._m}")

    def __add__(self, other: "EvenSymPoly") -> "EvenSymPoly":
        self._check_same(other)
        out = dict(self._terms)
        for lam, c in other._terms.items():
            out[lam] = out.get(lam, Fraction(0)) + c
        return EvenSymPoly(self._m, out)

    def __neg__(self) -> "EvenSymPoly":
        return self.scale(-1)

    def __sub__(self, other: "EvenSymPoly") -> "EvenSymPoly":
        return self + (-other)

    def scale(self, s) -> "EvenSymPoly":
        s = as_rational(s)
        return EvenSymPoly(self._m, {lam: s * c for lam, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, EvenSymPoly):
            return self.multiply(other)
        return self.scale(other)

    __rmul__ = __mul__

    def multiply(self, other: "EvenSymPoly") -> "EvenSymPoly":
        self._check_same(other)
        # Orbit sum times orbit sum: expand only the right factor, then read
        # off the coefficient of each canonical monomial.
        right = other.to_monomials()
        out: Monomials = {}
        for lam, c in self._terms.items():
            for sigma in distinct_permutations(lam):
                for mu, d in right.items():
                    key = tuple(s + t for s, t in zip(sigma, mu))
                    out[key] = out.get(key, Fraction(0)) + c * d
        return EvenSymPoly.from_monomials(self._m, out)

    # -- monomial conversion -----------------------------------------------

    def to_monomials(self) -> Monomials:
        out: Monomials = {}
        for lam, c in self._terms.items():
            for sigma in distinct_permutations(lam):
                out[sigma] = c
        return out

    @classmethod
    def from_monomials(cls, m: int, monos: Mapping[tuple[int, ...], Fraction]) -> "EvenSymPoly":
        """Collapse a full monomial map; raises if it is not symmetric."""
        monos = {beta: c for beta, c in monos.items() if c}
        terms: dict[Partition, Fraction] = {}
        for beta, c in monos.items():
            if len(beta) != m:
                raise ValueError(f"monomial {beta} has wrong length for m={m}")
            lam = canonical_partition(beta)
            if lam in terms:
                if terms[lam] != c:
                    raise NotSymmetricError(f"orbit {lam}: coefficients {terms[lam]} and {c} differ")
            else:
                terms[lam] = c
        for lam, c in terms.items():
            for sigma in distinct_permutations(lam):
                if monos.get(sigma, Fraction(0)) != c:
                    raise NotSymmetricError(f"monomial {sigma} missing from orbit {lam}")
        return cls(m, terms)

    # -- evaluation and serialization --------------------------------------

    def evaluate(self, x: Sequence):
        """Value at ``x``; exact when the entries of ``x`` are rationals."""
        x = list(x)
        if len(x) != self._m:
            raise ValueError(f"expected {self._m} coordinates, got {len(x)}")
        if all(isinstance(v, (int, Fraction)) for v in x):
            x = [as_rational(v) for v in x]
        sq = [v * v for v in x]
        total = 0
        for lam, c in self._terms.items():
            orbit = 0
            for sigma in distinct_permutations(lam):
                term = 1
                for s, e in zip(sq, sigma):
                    if e:
                        term = term * s**e
                orbit = orbit + term
            total = total + c * orbit
        return total

    def to_json(self) -> dict:
        return {
            "m": self._m,
            "terms": [
                {"partition": list(lam), "coeff": rational_to_str(c)}
                for lam, c in self._terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "EvenSymPoly":
        return cls(
            int(data["m"]),
            {tuple(t["partition"]): rational_from_str(t["coeff"]) for t in data["terms"]},
        )


def zero(m: int) -> EvenSymPoly:
    return EvenSymPoly(m)


def constant(m: int, c=1) -> EvenSymPoly:
    return EvenSymPoly(m, {(0,) * m: c})


def build_psi(m: int, k: int) -> EvenSymPoly:
    """The invariant of degree 2k: sum over |beta|=k of multinomial^2 * prod (2 beta_i)! x^(2 beta)."""
    return EvenSymPoly(
        m, {lam: multinomial(k, lam) ** 2 * even_factorial(lam) for lam in partitions_of(k, m)}
    )


def psi_norm_sq(n: int, m: int, k: int) -> Fraction:
    """Squared norm of psi_k in the minimal representation, 16^k (k!)^2 (m/2)_k (n/2)_k."""
    if not n >= m >= 1:
        raise ValueError("need n >= m >= 1")
    return (
        Fraction(16) ** k
        * math.factorial(k) ** 2
        * pochhammer(Fraction(m, 2), k)
        * pochhammer(Fraction(n, 2), k)
    )


def psi_boundary_value(m: int, k: int) -> Fraction:
    """Value of psi_k at the all-ones point: 4^k k! (m/2)_k."""
    return 4**k * math.factorial(k) * pochhammer(Fraction(m, 2), k)


def phi_evaluate(n: int, m: int, k: int, x: Iterable[float]) -> float:
    """Orthonormal invariant phi_k = psi_k / ||psi_k|| at a real point."""
    if n < m:
        raise ValueError("need n >= m")
    x = [float(v) for v in x]
    val = build_psi(m, k).evaluate(x)
    return val / math.sqrt(psi_norm_sq(n, m, k))
