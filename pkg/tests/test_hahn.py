import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from branchlaw.exact_core import pochhammer
from branchlaw.hahn import (
    SpectralValue,
    alpha,
    alpha_sq,
    hahn_params,
    hahn_recurrence_next,
    hahn_S,
    hahn_S_coeffs,
    polynomial_json,
    primed_coeffs,
    stilde,
    stilde_alpha,
    stilde_family,
)
from branchlaw.radial_ops import jacobi_coeffs

nm = st.integers(1, 5).flatmap(lambda m: st.tuples(st.integers(m, m + 8), st.just(m)))
ys = st.fractions(min_value=-10, max_value=10, max_denominator=9)


def test_params_examples():
    p = hahn_params(5, 1)
    assert (p.a, p.b, p.c) == (1, Fraction(3, 2), Fraction(-1, 2))
    p = hahn_params(6, 2)
    assert (p.a, p.b, p.c) == (Fraction(3, 2), Fraction(3, 2), Fraction(-1, 2))
    p = hahn_params(4, 2)
    assert (p.a, p.b, p.c) == (1, 1, 0)
    with pytest.raises(ValueError):
        hahn_params(2, 3)


@given(nm)
def test_param_identities(pair):
    n, m = pair
    p = hahn_params(n, m)
    assert p.a + p.b == Fraction(n, 2)
    assert p.a + p.c == Fraction(m, 2)
    assert p.b + p.c == 1


def test_spectral_values():
    p = hahn_params(9, 2)
    assert SpectralValue.discrete(p, 1).y == Fraction(-1, 16)
    with pytest.raises(ValueError):
        SpectralValue.discrete(p, 2)
    assert SpectralValue.continuous(3.0).y == 9.0
    with pytest.raises(ValueError):
        SpectralValue(-1.0)


def test_S_examples():
    p = hahn_params(5, 1)
    assert hahn_S(0, Fraction(7), p) == 1
    for y in (Fraction(0), Fraction(3, 2), Fraction(-5)):
        assert hahn_S(1, y, p) == Fraction(1, 4) - y
    assert hahn_S_coeffs(1, p) == [Fraction(1, 4), -1]


def test_recurrence_first_step():
    p = hahn_params(5, 1)
    assert primed_coeffs(0, p) == (0, Fraction(-5, 4), Fraction(5, 4))
    assert hahn_recurrence_next(0, Fraction(0), p, Fraction(1), Fraction(0)) == Fraction(1, 5)
    assert stilde(1, Fraction(0), p) == Fraction(1, 5)


@given(nm, ys)
def test_sum_equals_recurrence_exactly(pair, y):
    p = hahn_params(*pair)
    prev, cur = Fraction(0), Fraction(1)
    for k in range(8):
        assert cur == stilde(k, y, p)
        prev, cur = cur, hahn_recurrence_next(k, y, p, cur, prev)
    assert cur == stilde(8, y, p)


@given(nm)
def test_leading_coefficient_and_degree(pair):
    p = hahn_params(*pair)
    for k in range(7):
        cf = hahn_S_coeffs(k, p)
        assert len(cf) == k + 1 and cf[-1] == (-1) ** k
        # interpolating through k+1 exact samples recovers the same polynomial
        pts = [Fraction(i, 3) for i in range(k + 1)]
        vals = [hahn_S(k, y, p) for y in pts]
        assert vals == [sum(c * y**i for i, c in enumerate(cf)) for y in pts]


def test_against_mpmath_hypergeometric():
    p = hahn_params(7, 3)
    a, b, c = float(p.a), float(p.b), float(p.c)
    for k in range(6):
        for x in (0.4, 1.7):
            ref = mpmath.hyp3f2(-k, a + 1j * x, a - 1j * x, a + b, a + c, 1)
            assert abs(stilde(k, x * x, p) - float(ref.real)) < 1e-12 * max(1, abs(ref))


def test_float_family_matches_sum():
    p = hahn_params(6, 2)
    y = np.linspace(-2, 40, 9)
    fam = stilde_family(y, p, 6)
    for k in range(7):
        assert np.allclose(fam[k], stilde(k, y, p), rtol=1e-11, atol=1e-13)


def test_alpha_examples():
    assert math.isclose(alpha(5, 1, 0), (math.gamma(0.5) * math.gamma(2.5)) ** -0.5, rel_tol=1e-14)
    assert math.isclose(alpha(5, 1, 1) * (math.gamma(0.5) * math.gamma(2.5)) ** 0.5, 5, rel_tol=1e-14)
    assert alpha_sq(5, 1, 1) == 25
    for n, m in [(5, 1), (6, 2), (8, 3)]:
        for k in range(6):
            ratio = alpha(n, m, k + 1) / alpha(n, m, k)
            assert math.isclose(ratio, 4 * (k + m / 2) * (k + n / 2), rel_tol=1e-13)


@given(nm, ys)
def test_alpha_family_satisfies_unprimed_recurrence(pair, y):
    # alpha_k / alpha_0 = 4^k (m/2)_k (n/2)_k is rational, so the check is exact
    n, m = pair
    p = hahn_params(n, m)

    def sa(j):
        return 4**j * pochhammer(Fraction(m, 2), j) * pochhammer(Fraction(n, 2), j) * stilde(j, y, p)

    for k in range(6):
        jc = jacobi_coeffs(n, m, k)
        rhs = jc.B * sa(k) + jc.C * sa(k + 1) + (jc.A * sa(k - 1) if k else 0)
        assert -(p.a**2 + y) * sa(k) == rhs


def test_stilde_alpha_pointwise_recurrence():
    n, m = 6, 2
    p = hahn_params(n, m)
    y = np.array([0.3, 2.5, 11.0])
    for k in range(1, 5):
        jc = jacobi_coeffs(n, m, k)
        lhs = -(float(p.a) ** 2 + y) * stilde_alpha(k, y, p)
        rhs = (float(jc.A) * stilde_alpha(k - 1, y, p) + float(jc.B) * stilde_alpha(k, y, p)
               + float(jc.C) * stilde_alpha(k + 1, y, p))
        assert np.allclose(lhs, rhs, rtol=1e-11)
    assert np.allclose(stilde_alpha(0, y, p), alpha(n, m, 0))


def test_polynomial_json():
    data = polynomial_json(1, hahn_params(5, 1))
    assert data["S"] == ["1/4", "-1"]
    assert data["S_tilde"] == ["1/5", "-4/5"]
    assert data["S_tilde_alpha"]["alpha_sq_times_gamma"] == "25"
