"""Kernel tests: hat/vee, exp/log, the dexp family, truncations, adjoints.

Closed forms are checked against independent series oracles (truncated
matrix-power and ad-power sums) and all starred maps against their defining
pairing identities on random probes.
"""

from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest

from liesymp import so3
from liesymp.algebra import BERNOULLI, MAX_CUTOFF, SO3, Abelian
from liesymp.errors import BranchCut, InvalidInput


def series_exp(x, terms=30):
    """Oracle: sum hat(x)^k / k!."""
    k = so3.hat(x)
    acc = np.eye(3)
    term = np.eye(3)
    for j in range(1, terms):
        term = term @ k / j
        acc = acc + term
    return acc


def series_dexp(x, y, terms=30):
    """Oracle: sum ad_x^k y / (k+1)!."""
    acc = np.zeros(3)
    term = np.asarray(y, dtype=float)
    for k in range(terms):
        acc = acc + term / factorial(k + 1)
        term = np.cross(x, term)
    return acc


def series_dexpinv(x, y, terms=30):
    """Oracle: sum B_k / k! ad_x^k y with Bernoulli numbers from scratch."""
    bern = bernoulli_numbers(terms)
    acc = np.zeros(3)
    term = np.asarray(y, dtype=float)
    for k in range(terms):
        acc = acc + float(bern[k]) / factorial(k) * term
        term = np.cross(x, term)
    return acc


def series_Ad(x, y, terms=30):
    """Oracle: Ad_exp(x) = sum ad_x^k / k! applied to y."""
    acc = np.zeros(3)
    term = np.asarray(y, dtype=float)
    for k in range(terms):
        acc = acc + term / factorial(k)
        term = np.cross(x, term)
    return acc


def bernoulli_numbers(n):
    """B_0..B_n (B_1 = -1/2) via sum_{j<=k} C(k+1, j) B_j = 0."""
    bern = [Fraction(1)]
    for k in range(1, n + 1):
        acc = Fraction(0)
        for j in range(k):
            acc += comb(k + 1, j) * bern[j]
        bern.append(-acc / (k + 1))
    return bern


# ---------------------------------------------------------------------------
# hat / vee
# ---------------------------------------------------------------------------

def test_hat_zero():
    assert np.array_equal(so3.hat(np.zeros(3)), np.zeros((3, 3)))


def test_hat_vee_roundtrip():
    v = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(so3.vee(so3.hat(v)), v)


def test_hat_is_cross_product(rng):
    for _ in range(100):
        v, w = rng.standard_normal(3), rng.standard_normal(3)
        assert np.allclose(so3.hat(v) @ w, np.cross(v, w), atol=1e-15)


def test_vee_rejects_non_skew():
    with pytest.raises(InvalidInput):
        so3.vee(np.eye(3))


def test_hat_rejects_bad_shape():
    with pytest.raises(InvalidInput):
        so3.hat(np.zeros(4))


# ---------------------------------------------------------------------------
# exp / log
# ---------------------------------------------------------------------------

def test_exp_zero_is_identity():
    assert np.array_equal(so3.exp(np.zeros(3)), np.eye(3))


def test_exp_quarter_turn_matches_series():
    x = np.array([0.0, 0.0, np.pi / 2])
    expected = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    assert np.max(np.abs(so3.exp(x) - series_exp(x))) < 1e-14
    assert np.max(np.abs(so3.exp(x) - expected)) < 1e-15


def test_exp_matches_series_on_random_inputs(rng):
    for _ in range(200):
        x = rng.uniform(-1.0, 1.0, 3)
        assert np.max(np.abs(so3.exp(x) - series_exp(x))) < 1e-14


def test_exp_inverse_property(rng):
    for _ in range(50):
        x = rng.uniform(-2.0, 2.0, 3)
        g = so3.exp(x) @ so3.exp(-x)
        assert np.max(np.abs(g - np.eye(3))) < 1e-14


def test_exp_orthogonality_large_inputs(rng):
    for _ in range(200):
        x = rng.uniform(-10.0, 10.0, 3)
        g = so3.exp(x)
        assert np.max(np.abs(g.T @ g - np.eye(3))) <= 1e-12
        assert np.linalg.det(g) > 0


def test_log_identity():
    assert np.array_equal(so3.log(np.eye(3)), np.zeros(3))


def test_log_roundtrip():
    x = np.array([0.1, 0.2, 0.3])
    assert np.allclose(so3.log(so3.exp(x)), x, atol=1e-14)


def test_exp_log_roundtrip_random(rng):
    for _ in range(200):
        x = rng.uniform(-1.0, 1.0, 3)
        g = so3.exp(x)
        assert np.max(np.abs(so3.exp(so3.log(g)) - g)) < 1e-10


def test_log_small_angle():
    x = np.array([1e-6, -2e-6, 1.5e-6])
    assert np.allclose(so3.log(so3.exp(x)), x, rtol=1e-12, atol=1e-20)


def test_log_branch_cut_at_pi():
    g = so3.exp(np.pi * np.array([0.0, 0.0, 1.0]))
    with pytest.raises(BranchCut):
        so3.log(g)


def test_log_accurate_up_to_branch_margin(rng):
    # the roundtrip contract (1e-10) must hold right up to the cut at
    # pi - 1e-6, where theta / sin(theta) is at its most ill-conditioned
    for theta in (np.pi - 2e-6, np.pi - 1e-4, np.pi - 1e-2):
        for _ in range(50):
            u = rng.standard_normal(3)
            u /= np.linalg.norm(u)
            g = so3.exp(theta * u)
            assert np.max(np.abs(so3.exp(so3.log(g)) - g)) < 1e-10


# ---------------------------------------------------------------------------
# dexp family
# ---------------------------------------------------------------------------

def test_dexp_at_zero_is_identity(rng):
    y = rng.standard_normal(3)
    assert np.array_equal(so3.dexp(np.zeros(3), y), y)
    assert np.array_equal(so3.dexpinv(np.zeros(3), y), y)


def test_dexp_matches_series():
    x = 0.5 * np.array([0.6, -0.64, 0.48])   # |x| = 0.5
    y = np.array([0.3, 0.7, -0.2])
    assert np.max(np.abs(so3.dexp(x, y) - series_dexp(x, y))) < 1e-14


def test_dexp_series_agreement_random(rng):
    for _ in range(1000):
        x = rng.uniform(-0.577, 0.577, 3)   # |x| <= 1
        y = rng.standard_normal(3)
        assert np.max(np.abs(so3.dexp(x, y) - series_dexp(x, y))) < 1e-13
        assert np.max(np.abs(so3.dexpinv(x, y) - series_dexpinv(x, y))) < 1e-13


def test_dexpinv_inverts_dexp(rng):
    for _ in range(200):
        x = rng.uniform(-1.5, 1.5, 3)
        y = rng.standard_normal(3)
        assert np.allclose(so3.dexpinv(x, so3.dexp(x, y)), y, atol=1e-12)


def test_dexp_dexpinv_minus_x_is_Ad(rng):
    # dexp_x o dexpinv_{-x} = Ad_{exp(x)}
    for _ in range(1000):
        x = rng.uniform(-1.0, 1.0, 3)
        y = rng.standard_normal(3)
        lhs = so3.dexp(x, so3.dexpinv(-x, y))
        assert np.max(np.abs(lhs - so3.exp(x) @ y)) < 1e-12


def test_dexp_star_pairing(rng):
    for _ in range(1000):
        x = rng.uniform(-1.5, 1.5, 3)
        y, mu = rng.standard_normal(3), rng.standard_normal(3)
        scale = 1.0 + abs(mu @ so3.dexp(x, y))
        assert abs(so3.dexp_star(x, mu) @ y - mu @ so3.dexp(x, y)) < 1e-13 * scale
        assert abs(so3.dexpinv_star(x, mu) @ y - mu @ so3.dexpinv(x, y)) < 1e-13 * scale


def test_dexp_branch_cut():
    x = (2 * np.pi - 1e-9) * np.array([1.0, 0.0, 0.0])
    with pytest.raises(BranchCut):
        so3.dexpinv(x, np.ones(3))
    with pytest.raises(BranchCut):
        so3.dexp_star(x, np.ones(3))


# ---------------------------------------------------------------------------
# structure: bracket, ad*, Ad
# ---------------------------------------------------------------------------

def test_bracket_antisymmetry_and_cross(so3_struct=SO3):
    x = np.array([1.0, 0.0, 0.0])
    y = np.array([0.0, 1.0, 0.0])
    assert np.array_equal(so3_struct.bracket(x, x), np.zeros(3))
    assert np.array_equal(so3_struct.bracket(x, y), np.array([0.0, 0.0, 1.0]))


def test_bracket_matches_matrix_commutator(rng):
    for _ in range(1000):
        x, y = rng.standard_normal(3), rng.standard_normal(3)
        comm = so3.hat(x) @ so3.hat(y) - so3.hat(y) @ so3.hat(x)
        assert np.allclose(SO3.bracket(x, y), so3.vee(comm, tol=1e-10), atol=1e-13)


def test_jacobi_identity(rng):
    for _ in range(1000):
        x, y, z = (rng.standard_normal(3) for _ in range(3))
        total = (SO3.bracket(x, SO3.bracket(y, z))
                 + SO3.bracket(y, SO3.bracket(z, x))
                 + SO3.bracket(z, SO3.bracket(x, y)))
        bound = 1e-12 * max(np.linalg.norm(x) * np.linalg.norm(y) * np.linalg.norm(z), 1.0)
        assert np.max(np.abs(total)) <= bound


def test_bracket_dimension_mismatch():
    with pytest.raises(InvalidInput):
        SO3.bracket(np.zeros(3), np.zeros(2))


def test_ad_star_zero_cases(rng):
    mu = rng.standard_normal(3)
    assert np.array_equal(SO3.ad_star(np.zeros(3), mu), np.zeros(3))


def test_ad_star_pairing_basis():
    # solve <ad*_x mu, e_j> = <mu, [x, e_j]> over the basis
    x = np.array([0.0, 0.0, 1.0])
    mu = np.array([1.0, 0.0, 0.0])
    expected = np.array([mu @ SO3.bracket(x, e) for e in np.eye(3)])
    assert np.allclose(SO3.ad_star(x, mu), expected, atol=1e-15)


def test_ad_star_pairing_random(rng):
    for _ in range(1000):
        x, y, mu = (rng.standard_normal(3) for _ in range(3))
        lhs = SO3.ad_star(x, mu) @ y
        rhs = mu @ SO3.bracket(x, y)
        assert abs(lhs - rhs) < 1e-13 * (1.0 + abs(rhs))


def test_Ad_identity_and_action(rng):
    x = rng.standard_normal(3)
    assert np.array_equal(SO3.Ad(np.eye(3), x), x)
    g = so3.exp(rng.uniform(-2, 2, 3))
    assert np.allclose(SO3.Ad(g, SO3.Ad(g.T, x)), x, atol=1e-14)


def test_Ad_star_pairing(rng):
    for _ in range(100):
        g = so3.exp(rng.uniform(-2, 2, 3))
        x, mu = rng.standard_normal(3), rng.standard_normal(3)
        assert abs(SO3.Ad_star(g, mu) @ x - mu @ SO3.Ad(g, x)) < 1e-13


def test_Ad_matches_series(rng):
    for _ in range(1000):
        x = rng.uniform(-0.577, 0.577, 3)
        y = rng.standard_normal(3)
        assert np.max(np.abs(SO3.Ad(so3.exp(x), y) - series_Ad(x, y))) < 1e-13


# ---------------------------------------------------------------------------
# truncations
# ---------------------------------------------------------------------------

def test_bernoulli_constants_match_recurrence():
    exact = bernoulli_numbers(MAX_CUTOFF)
    assert [float(v) for v in exact] == pytest.approx(list(BERNOULLI), abs=0.0)


def test_dexpinv_trunc_r0_is_identity(rng):
    x, y = rng.standard_normal(3), rng.standard_normal(3)
    assert np.array_equal(SO3.dexpinv_trunc(0, x, y), y)


def test_dexpinv_trunc_r1_formula(rng):
    x, y = rng.standard_normal(3), rng.standard_normal(3)
    expected = y - 0.5 * np.cross(x, y)
    assert np.allclose(SO3.dexpinv_trunc(1, x, y), expected, atol=1e-15)


def test_dexpinv_trunc_invalid_r():
    with pytest.raises(InvalidInput):
        SO3.dexpinv_trunc(7, np.zeros(3), np.zeros(3))
    with pytest.raises(InvalidInput):
        SO3.dexpinv_trunc(-1, np.zeros(3), np.zeros(3))


def test_dexpinv_trunc_r2_error_shrinks_8x():
    x0 = np.array([0.4, -0.3, 0.5])
    y = np.array([0.2, 0.9, -0.1])
    # B_3 = 0, so the r=2 and r=3 truncations coincide and the remainder is
    # O(|x|^4): halving |x| shrinks the error by 16 (>= the stated 8).
    e1 = np.linalg.norm(SO3.dexpinv_trunc(2, x0, y) - so3.dexpinv(x0, y))
    e2 = np.linalg.norm(SO3.dexpinv_trunc(2, 0.5 * x0, y) - so3.dexpinv(0.5 * x0, y))
    assert e1 / e2 >= 8.0


@pytest.mark.parametrize("r,sharp", [(0, 1), (1, 2), (2, 4), (3, 4), (4, 6)])
def test_dexpinv_trunc_remainder_order(r, sharp):
    # remainder is O(|x|^(r+1)); the measured slope equals the first omitted
    # nonzero Bernoulli order (r+2 for even r >= 2 since B_odd = 0)
    x0 = np.array([0.5, -0.4, 0.3])
    y = np.array([0.7, 0.2, -0.4])
    hs = np.array([0.5, 0.25, 0.125, 0.0625])
    errs = [np.linalg.norm(SO3.dexpinv_trunc(r, h * x0, y) - so3.dexpinv(h * x0, y))
            for h in hs]
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert slope >= (r + 1) - 0.1
    assert abs(slope - sharp) <= 0.1


def test_dexpinv_trunc_star_is_adjoint(rng):
    for r in range(MAX_CUTOFF + 1):
        for _ in range(200):
            x, y, mu = (rng.standard_normal(3) for _ in range(3))
            lhs = SO3.dexpinv_trunc_star(r, x, mu) @ y
            rhs = mu @ SO3.dexpinv_trunc(r, x, y)
            assert abs(lhs - rhs) < 1e-13 * (1.0 + abs(rhs))


# ---------------------------------------------------------------------------
# P* polynomial
# ---------------------------------------------------------------------------

def test_p_star_r0_zero(rng):
    x, xi, mu = (rng.standard_normal(3) for _ in range(3))
    assert np.array_equal(SO3.p_star_poly(0, x, xi, mu), np.zeros(3))


def test_p_star_r1(rng):
    x, xi, mu = (rng.standard_normal(3) for _ in range(3))
    assert np.allclose(SO3.p_star_poly(1, x, xi, mu),
                       0.5 * SO3.ad_star(xi, mu), atol=1e-15)


def test_p_star_r2_explicit(rng):
    # (1/2) ad*_xi - (1/6) ad*_xi ad*_x + (1/12) ad*_x ad*_xi
    x, xi, mu = (rng.standard_normal(3) for _ in range(3))
    expected = (0.5 * SO3.ad_star(xi, mu)
                - SO3.ad_star(xi, SO3.ad_star(x, mu)) / 6.0
                + SO3.ad_star(x, SO3.ad_star(xi, mu)) / 12.0)
    assert np.allclose(SO3.p_star_poly(2, x, xi, mu), expected, atol=1e-14)


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5, 6])
def test_p_star_is_adjoint_of_trunc_derivative(r, rng):
    # <P*_r(x, xi) mu, dx> == <mu, d/de dexpinv_trunc(r, x + e dx, xi)|_0>
    eps = 1e-6
    for _ in range(25):
        x, xi, mu, dx = (rng.uniform(-1, 1, 3) for _ in range(4))
        lhs = SO3.p_star_poly(r, x, xi, mu) @ dx
        dplus = SO3.dexpinv_trunc(r, x + eps * dx, xi)
        dminus = SO3.dexpinv_trunc(r, x - eps * dx, xi)
        rhs = mu @ ((dplus - dminus) / (2.0 * eps))
        assert abs(lhs - rhs) < 1e-6 * (1.0 + abs(rhs))


def test_p_star_invalid_r():
    with pytest.raises(InvalidInput):
        SO3.p_star_poly(9, np.zeros(3), np.zeros(3), np.zeros(3))


# ---------------------------------------------------------------------------
# abelian instance
# ---------------------------------------------------------------------------

def test_abelian_bracket_zero():
    ab = Abelian(2)
    assert np.array_equal(ab.bracket(np.array([1.0, 2.0]), np.array([3.0, 4.0])),
                          np.zeros(2))


def test_abelian_exp_is_identity(rng):
    ab = Abelian(4)
    x = rng.standard_normal(4)
    assert np.array_equal(ab.exp(x), x)
    assert np.array_equal(ab.log(x), x)


def test_abelian_dexp_family_identity(rng):
    ab = Abelian(3)
    x, y = rng.standard_normal(3), rng.standard_normal(3)
    for fn in (ab.dexp, ab.dexpinv, ab.dexp_star, ab.dexpinv_star):
        assert np.array_equal(fn(x, y), y)
    assert np.array_equal(ab.dexpinv_trunc(3, x, y), y)
    assert np.array_equal(ab.p_star_poly(3, x, x, y), np.zeros(3))


def test_abelian_group_ops():
    ab = Abelian(2)
    g = np.array([1.0, -2.0])
    h = np.array([0.5, 4.0])
    assert np.array_equal(ab.product(g, h), g + h)
    assert np.array_equal(ab.inverse(g), -g)
    assert np.array_equal(ab.Ad(g, h), h)
    assert np.array_equal(ab.identity(), np.zeros(2))


def test_abelian_dimension_check():
    with pytest.raises(InvalidInput):
        Abelian(2).bracket(np.zeros(2), np.zeros(3))
    with pytest.raises(InvalidInput):
        Abelian(0)
