import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from branchlaw.geometry import (
    DomainPoint,
    GroupElement,
    J_form,
    a0_element,
    alpha_sq_embedding,
    bergman_kernel,
    casimir_discrete_check,
    decay_slope,
    expansion_coeff,
    harish_chandra_factor,
    jacobian,
    kernel_h,
    mc_T1,
    mobius_action,
    nilpotent_q,
    nilpotent_z,
    sample_domain_point,
    sample_group,
    sample_stiefel,
    shilov_base,
    sphere_moment,
    stiefel_samples,
    structure_constants,
    t1_norm_sq,
    t1_series,
    verify_group_identities,
)
from branchlaw.exact_core import pochhammer
from branchlaw.sympoly import build_psi

PAIRS = [(3, 1), (4, 2), (5, 2)]
seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("kind", ["SU", "SO"])
@pytest.mark.parametrize("n,m", PAIRS)
def test_sampled_group_invariants(n, m, kind):
    g = sample_group(n, m, kind, 1.5, 3)
    assert g.form_defect() < 1e-10 and g.det_defect() < 1e-10
    assert (kind == "SO") == g.is_real
    assert np.allclose(sample_group(n, m, kind, 0.0).g, np.eye(n + m))


def test_group_element_check():
    with pytest.raises(ValueError):
        GroupElement(2 * np.eye(4), 3, 1).check()
    with pytest.raises(ValueError):
        GroupElement(np.eye(3), 3, 1)


def test_domain_point_check():
    with pytest.raises(ValueError):
        DomainPoint(np.ones((3, 1))).check()
    assert DomainPoint(np.zeros((3, 2))).check().eigen_floor() == 1.0


@settings(max_examples=30)
@given(st.sampled_from(PAIRS), seeds)
def test_action_stays_in_domain_and_composes(pair, seed):
    n, m = pair
    g1, g2 = sample_group(n, m, "SU", 1.0, seed), sample_group(n, m, "SO", 1.0, seed + 1)
    z = sample_domain_point(n, m, seed + 2)
    w = mobius_action(g1, z)
    w.check()
    assert np.allclose(mobius_action(g1 @ g2, z).z, mobius_action(g1, mobius_action(g2, z)).z, atol=1e-10)
    assert np.allclose(mobius_action(GroupElement(np.eye(n + m), n, m), z).z, z.z)


def test_block_diagonal_fixes_origin():
    g = sample_group(4, 2, "SU", 1.0, 0)
    A, _, _, D = g.blocks
    k = np.zeros_like(g.g)
    k[:4, :4], k[4:, 4:] = A, D
    assert np.allclose(mobius_action(GroupElement(k, 4, 2), np.zeros((4, 2))).z, 0)


@settings(max_examples=30)
@given(st.sampled_from(PAIRS), seeds)
def test_harish_chandra_reconstruction(pair, seed):
    n, m = pair
    g = sample_group(n, m, "SU", 1.0, seed)
    z = sample_domain_point(n, m, seed + 5).z
    f = harish_chandra_factor(g, z)
    ez = np.eye(n + m, dtype=complex)
    ez[:n, n:] = z
    assert np.allclose(f.product(), g.g @ ez, atol=1e-10)
    assert np.allclose(f.plus, mobius_action(g, z).z)


def test_identity_factorization():
    z = sample_domain_point(4, 2, 1).z
    f = harish_chandra_factor(GroupElement(np.eye(6), 4, 2), z)
    assert np.allclose(f.plus, z) and np.allclose(f.k_component(), np.eye(6))
    assert jacobian(GroupElement(np.eye(6), 4, 2), z) == 1


@pytest.mark.parametrize("n,m", [(4, 2), (5, 2), (6, 3), (3, 1)])
def test_nilpotent_elements_have_unit_jacobian(n, m):
    rng = np.random.default_rng(n * 10 + m)
    q = rng.standard_normal((m, m))
    q = q - q.T
    gq = nilpotent_q(n, m, q)
    assert gq.form_defect() < 1e-10
    f = harish_chandra_factor(gq, shilov_base(n, m))
    assert np.allclose(f.k_component(), np.eye(n + m), atol=1e-12)
    gz = nilpotent_z(n, m, rng.standard_normal((n - m, m)))
    assert gz.form_defect() < 1e-10
    assert abs(jacobian(gz, shilov_base(n, m)) - 1) < 1e-10
    with pytest.raises(ValueError):
        nilpotent_q(n, m, np.ones((m, m)) + np.eye(m))


@pytest.mark.parametrize("n,m", PAIRS)
def test_a0_jacobian(n, m):
    for t in (-1.3, 0.0, 0.4, 2.0):
        got = jacobian(a0_element(n, m, t), shilov_base(n, m))
        assert abs(got / math.exp(-(n + m) * m * t) - 1) < 1e-9
        # interior approach r -> 1 converges to the boundary value
        near = jacobian(a0_element(n, m, t), (1 - 1e-9) * shilov_base(n, m))
        assert abs(near / got - 1) < 1e-6


@settings(max_examples=30)
@given(st.sampled_from(PAIRS), seeds)
def test_kernel_h_and_bergman(pair, seed):
    n, m = pair
    z, w = sample_domain_point(n, m, seed), sample_domain_point(n, m, seed + 1)
    hz = kernel_h(z, z)
    assert abs(hz.imag) < 1e-12 and 0 < hz.real <= 1 + 1e-12
    g = sample_group(n, m, "SU", 1.0, seed + 2)
    lhs = bergman_kernel(mobius_action(g, z), mobius_action(g, w))
    rhs = bergman_kernel(z, w) / (jacobian(g, z) * np.conj(jacobian(g, w)))
    assert abs(lhs - rhs) <= 1e-9 * abs(rhs)
    assert kernel_h(np.zeros((n, m)), np.zeros((n, m))) == 1


def test_chain_rule():
    for s in range(10):
        g1, g2 = sample_group(5, 2, "SU", 1.0, s), sample_group(5, 2, "SU", 1.0, 100 + s)
        z = sample_domain_point(5, 2, 200 + s)
        lhs = jacobian(g1 @ g2, z)
        rhs = jacobian(g1, mobius_action(g2, z)) * jacobian(g2, z)
        assert abs(lhs - rhs) <= 1e-9 * abs(rhs)


def test_identity_suite_deterministic():
    a = verify_group_identities(trials=5, seed=1)
    b = verify_group_identities(trials=5, seed=1)
    assert a == b and a["pass"]


def test_stiefel():
    v = sample_stiefel(6, 3, 4)
    v.check()
    assert np.allclose(sample_stiefel(6, 3, 4).v, v.v)
    with pytest.raises(ValueError):
        sample_stiefel(2, 3)


def test_stiefel_first_column_uniform():
    # hemisphere counts along three fixed directions, chi-square at 99%
    n, m = 5, 2
    v = stiefel_samples(n, m, 40000, seed=11)
    col = v[:, :, 0]
    assert np.allclose(np.linalg.norm(col, axis=1), 1)
    dirs = np.eye(n)[:3]
    for d in dirs:
        pos = int(np.sum(col @ d > 0))
        chi2 = stats.chisquare([pos, len(col) - pos])
        assert chi2.pvalue > 0.01
    # even moments against the exact sphere moments
    assert abs(np.mean(col[:, 0] ** 2) - float(sphere_moment(n, 2))) < 5 * 0.2 / math.sqrt(len(col))


def test_stiefel_invariance():
    n, m = 4, 2
    v = stiefel_samples(n, m, 40000, seed=3)
    rng = np.random.default_rng(0)
    a, _ = np.linalg.qr(rng.standard_normal((n, n)))
    b, _ = np.linalg.qr(rng.standard_normal((m, m)))
    w = np.einsum("ij,bjk,lk->bil", a, v, b)
    stat_v = np.mean(v[:, 0, 0] ** 4)
    stat_w = np.mean(w[:, 0, 0] ** 4)
    se = np.std(v[:, 0, 0] ** 4) / math.sqrt(len(v))
    assert abs(stat_v - stat_w) < 6 * se


def test_sphere_moments():
    assert sphere_moment(7, 3) == 0
    assert sphere_moment(5, 2) == Fraction(1, 5)
    assert sphere_moment(3, 4) == Fraction(1, 5)
    with pytest.raises(ValueError):
        sphere_moment(1, 2)


@given(st.integers(2, 12), st.integers(0, 8))
def test_sphere_moment_beta_oracle(n, k):
    # Gamma(n/2) B((2k+1)/2, (n-1)/2) / (Gamma(1/2) Gamma((n-1)/2))
    ref = math.exp(math.lgamma(n / 2) + math.lgamma(k + 0.5) - math.lgamma(0.5) - math.lgamma(k + n / 2))
    assert math.isclose(float(sphere_moment(n, 2 * k)), ref, rel_tol=1e-12)


def test_expansion_coeff():
    assert expansion_coeff(5, 0) == 1
    assert expansion_coeff(5, 1) == Fraction(1, 10)
    for n in (3, 5, 8):
        for k in range(6):
            assert expansion_coeff(n, k) == 1 / (4**k * math.factorial(k) * pochhammer(Fraction(n, 2), k))
            assert expansion_coeff(n, k) * math.factorial(2 * k) == sphere_moment(n, 2 * k)


def test_series_value_on_axis():
    z = np.zeros((5, 1))
    z[0, 0] = 0.5
    exact = sum(expansion_coeff(5, k) * build_psi(1, k).evaluate([Fraction(1, 2)]) for k in range(11))
    assert math.isclose(t1_series(5, 1, z, 10), float(exact), rel_tol=1e-14)
    assert abs(float(exact) - 1.05617) < 1e-4


def test_mc_T1_zero_and_determinism():
    rep = mc_T1(4, 2, np.zeros((4, 2)), 1000, 5)
    assert rep["estimate"] == 1.0 and rep["std_error"] == 0.0
    z = np.zeros((6, 2))
    z[0, 0], z[1, 1] = 0.3, 0.2
    a = mc_T1(6, 2, z, 150000, 9, workers=1)
    b = mc_T1(6, 2, z, 150000, 9, workers=3)
    assert a == b
    with pytest.raises(ValueError):
        mc_T1(3, 1, np.ones((3, 1)), 100, 0)


def test_mc_T1_matches_series_small():
    z = np.zeros((5, 2))
    z[0, 0], z[1, 1] = 0.4, 0.25
    rep = mc_T1(5, 2, z, 200000, 1)
    assert abs(rep["estimate"] - t1_series(5, 2, z, 20)) < 4 * rep["std_error"]


def test_t1_norm_sq():
    r = t1_norm_sq(5, 1, 200)
    assert r["converges"] and r["limit"] == Fraction(3, 2)
    assert r["partial_sums"][-1] < 1.5
    assert t1_norm_sq(8, 2, 10)["limit"] == Fraction(3, 2)
    d = t1_norm_sq(4, 2, 100)
    assert not d["converges"] and d["limit"] is None
    # (1)_k/(2)_k = 1/(k+1): harmonic growth
    assert math.isclose(d["partial_sums"][-1], sum(1 / (k + 1) for k in range(101)), rel_tol=1e-13)
    assert alpha_sq_embedding(5, 1, 1) == Fraction(1, 5)


def test_decay_slope():
    for n, m in [(5, 1), (6, 2), (9, 3), (4, 2)]:
        assert abs(decay_slope(n, m) + (n - m) / 2) < 0.1


def test_structure_constants():
    sc = structure_constants(5, 1)
    assert (sc.rho0_slope, sc.density_exponent, sc.tau_exponent) == (4, Fraction(2, 3), Fraction(1, 2))
    for n, m in [(5, 1), (6, 2), (9, 4)]:
        sc = structure_constants(n, m)
        # 2 rho_0 on t(E_1 + ... + E_m): root multiplicities m(m-1) + m(n-m)
        assert sc.rho0_slope == m * (m - 1) + m * (n - m)
        # e^{-2 rho_0} equals the A_0 Jacobian e^{-(n+m) m t} raised to (n-1)/(n+m)
        assert -sc.a0_jacobian_exponent * m * sc.density_exponent == sc.rho0_slope
        for t in (0.3, 1.1):
            assert math.isclose(math.exp(-float(sc.rho0_slope) * t),
                                math.exp(-(n + m) * m * t) ** float(sc.density_exponent), rel_tol=1e-12)


def test_casimir_discrete_check():
    assert casimir_discrete_check(5, 1) == (Fraction(-3, 4), Fraction(-3, 4), True)
    assert casimir_discrete_check(6, 2)[0] == -2
    assert casimir_discrete_check(7, 3)[0] == Fraction(-15, 4)
    with pytest.raises(ValueError):
        casimir_discrete_check(4, 2)


def test_J_form():
    assert np.array_equal(J_form(2, 1), np.diag([1.0, 1.0, -1.0]))
