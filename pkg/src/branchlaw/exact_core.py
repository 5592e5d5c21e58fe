"""Exact integer/rational substrate: Pochhammer symbols, multinomials, partitions.

Rationals are :class:`fractions.Fraction` throughout; they are always in lowest
terms with a positive denominator, and arithmetic never rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, prod
from typing import Iterator, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction]

MultiIndex = tuple[int, ...]
Partition = tuple[int, ...]


def as_rational(x: RationalLike | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} exactly to a rational")


def rational_to_str(q: RationalLike) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_from_str(s: str) -> Fraction:
    num, sep, den = s.strip().partition("/")
    if sep and not den:
        raise ValueError(f"malformed rational {s!r}")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError as exc:
        raise ValueError(f"malformed rational {s!r}") from exc
    if q == 0:
        raise ZeroDivisionError(f"zero denominator in {s!r}")
    return Fraction(p, q)


def pochhammer(t: RationalLike, k: int) -> Fraction:
    """Rising factorial (t)_k = t(t+1)...(t+k-1), with (t)_0 = 1."""
    if k < 0:
        raise ValueError("pochhammer needs k >= 0")
    t = as_rational(t)
    out = Fraction(1)
    for j in range(k):
        out *= t + j
    return out


def check_multi_index(beta: Sequence[int]) -> MultiIndex:
    beta = tuple(int(b) for b in beta)
    if any(b < 0 for b in beta):
        raise ValueError(f"multi-index entries must be nonnegative: {beta}")
    return beta


def multinomial(k: int, beta: Sequence[int]) -> int:
    """k! / prod(beta_i!) for a multi-index with |beta| = k."""
    beta = check_multi_index(beta)
    if sum(beta) != k:
        raise ValueError(f"|beta| = {sum(beta)} does not equal k = {k}")
    return factorial(k) // prod(factorial(b) for b in beta)


def even_factorial(beta: Sequence[int]) -> int:
    """prod_i (2 beta_i)!  -- the doubled-index factorial weighting the basis."""
    beta = check_multi_index(beta)
    return prod(factorial(2 * b) for b in beta)


def _partitions_desc(k: int, parts: int, cap: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if k == 0:
            yield ()
        return
    for first in range(min(k, cap), -1, -1):
        if first * parts < k:
            break
        for rest in _partitions_desc(k - first, parts - 1, first):
            yield (first,) + rest


def partitions_of(k: int, m: int) -> list[Partition]:
    """Partitions of k into at most m parts, zero-padded to length m.

    Ordered lexicographically descending, e.g. ``partitions_of(3, 2) ==
    [(3, 0), (2, 1)]``.
    """
    if k < 0 or m < 1:
        raise ValueError("need k >= 0 and m >= 1")
    return list(_partitions_desc(k, m, k))


def canonical_partition(beta: Sequence[int]) -> Partition:
    """Orbit label of a multi-index under permutations of its entries."""
    return tuple(sorted(check_multi_index(beta), reverse=True))


def distinct_permutations(part: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Distinct rearrangements of ``part`` in lexicographic descending order."""
    items = sorted(part, reverse=True)
    n = len(items)

    def rec(prefix: list[int], remaining: list[int]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        seen = None
        for i, v in enumerate(remaining):
            if v == seen:
                continue
            seen = v
            yield from rec(prefix + [v], remaining[:i] + remaining[i + 1:])

    yield from rec([], items)


def orbit_size(part: Sequence[int]) -> int:
    counts: dict[int, int] = {}
    for v in part:
        counts[v] = counts.get(v, 0) + 1
    return factorial(len(part)) // prod(factorial(c) for c in counts.values())
