import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_jacobi

from conftest import CATALOG
from zonalpd.jacobi import (
    dim_m_n,
    eigenvalue_lambda_n,
    gauss_jacobi_rule,
    gauss_jacobi_rule_mp,
    jacobi_eval,
    jacobi_eval_all,
    jacobi_norm_sq,
    jacobi_normalized,
    jacobi_value_at_one,
    koornwinder_p_n,
    pochhammer,
    weight_total_mass,
)
from zonalpd.spaces import make_space

CATALOG_PARAMS = [make_space(name) for name in CATALOG]


def msum_normalized(a, b, n, t):
    """Finite-sum form of p_n(cos 2 theta) with t = cos 2 theta.

    Term m carries (b+m+1)...(b+n) over (a+1)...(a+n-m) against
    ((1+t)/2)^m ((1-t)/2)^(n-m); the alternating sign makes it an
    independent route to the recurrence values.
    """
    total = 0.0
    for m in range(n + 1):
        num = 1.0
        for j in range(m + 1, n + 1):
            num *= b + j
        den = 1.0
        for j in range(1, n - m + 1):
            den *= a + j
        total += (
            (-1) ** (n - m)
            * math.comb(n, m)
            * (num / den)
            * ((1 + t) / 2) ** m
            * ((1 - t) / 2) ** (n - m)
        )
    return total


def test_legendre_values():
    vals = jacobi_eval_all((0.0, 0.0), 4, 0.0)
    assert vals[0] == 1.0
    assert vals[2] == pytest.approx(-0.5, abs=1e-15)
    assert jacobi_eval((0.0, 0.0), 1, 0.7) == pytest.approx(0.7, abs=1e-15)


def test_value_at_one():
    assert jacobi_value_at_one((2.0, 0.0), 1) == pytest.approx(3.0, rel=1e-14)
    for params in ((0.0, 0.0), (2.0, 0.0), (3.0, 1.0), (0.5, -0.5)):
        for n in range(11):
            direct = jacobi_eval(params, n, 1.0)
            assert jacobi_value_at_one(params, n) == pytest.approx(direct, rel=1e-12)
    # closed form survives n large enough to overflow naive factorial ratios
    big = jacobi_value_at_one((7.0, 3.0), 240)
    assert math.isfinite(big) and big > 0


def test_msum_oracle():
    a, b = 1.0, 0.5
    t = 0.3
    p5 = jacobi_normalized((a, b), 5, t)[5]
    assert p5 == pytest.approx(msum_normalized(a, b, 5, t), abs=1e-12)
    P5 = jacobi_eval((a, b), 5, t)
    assert P5 == pytest.approx(p5 * jacobi_value_at_one((a, b), 5), rel=1e-12)


@settings(max_examples=60)
@given(
    st.floats(min_value=-0.9, max_value=9.0),
    st.floats(min_value=-0.9, max_value=9.0),
    st.integers(min_value=0, max_value=25),
    st.floats(min_value=-1.0, max_value=1.0),
)
def test_recurrence_against_scipy(a, b, n, t):
    ours = jacobi_eval((a, b), n, t)
    ref = eval_jacobi(n, a, b, t)
    assert ours == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_normalized_basics():
    params = (3.0, 1.0)
    p = jacobi_normalized(params, 6, -0.37)
    assert p[0] == 1.0
    assert jacobi_normalized(params, 6, 1.0)[6] == pytest.approx(1.0, abs=1e-13)
    # |p_n| <= 1 on [-1,1] when beta >= -1/2 and alpha >= beta
    for a, b in ((0.0, 0.0), (2.0, 0.0), (3.0, 1.0), (1.0, -0.5)):
        for t in np.linspace(-1, 1, 101):
            vals = jacobi_normalized((a, b), 12, t)
            assert np.all(np.abs(vals) <= 1 + 1e-12)


def test_symmetry_oracle():
    # P_n^{(a,b)}(-t) = (-1)^n P_n^{(b,a)}(t)
    for a, b in ((3.0, 1.0), (2.0, 0.0), (0.5, -0.5)):
        for n in range(9):
            for t in (-1.0, -0.3, 0.5, 0.9):
                lhs = jacobi_eval((a, b), n, -t)
                rhs = (-1) ** n * jacobi_eval((b, a), n, t)
                assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
    p2 = jacobi_normalized((3.0, 1.0), 2, -1.0)[2]
    assert p2 == pytest.approx(
        jacobi_eval((1.0, 3.0), 2, 1.0) / jacobi_value_at_one((3.0, 1.0), 2), rel=1e-12
    )


def test_dim_m_n_values():
    assert dim_m_n((0.0, 0.0), 0) == 1.0
    assert dim_m_n((0.0, 0.0), 1) == pytest.approx(3.0, rel=1e-14)
    assert dim_m_n((1.0, 0.0), 1) == pytest.approx(8.0, rel=1e-14)
    # CP^2 eigenspace dimensions are the cubes (n+1)^3
    for n in range(7):
        assert dim_m_n((1.0, 0.0), n) == pytest.approx((n + 1) ** 3, rel=1e-12)
    # circle: alpha + beta + 1 = 0 is the regularized case, m_n = 2 for n >= 1
    for n in range(1, 6):
        assert dim_m_n((-0.5, -0.5), n) == pytest.approx(2.0, rel=1e-13)


@pytest.mark.parametrize("space", CATALOG_PARAMS, ids=CATALOG)
def test_dim_m_n_integer_on_catalog(space):
    for n in range(21):
        m = dim_m_n(space, n)
        assert m > 0
        assert abs(m - round(m)) < 1e-9 * max(1.0, m)


def test_eigenvalues():
    for space in CATALOG_PARAMS:
        assert eigenvalue_lambda_n(space, 0) == 0.0
    s2 = make_space("S2")
    assert eigenvalue_lambda_n(s2, 1) == pytest.approx(2.0, rel=1e-15)
    assert eigenvalue_lambda_n(make_space("CP2"), 1) == pytest.approx(12.0, rel=1e-15)
    # spheres: 4 kappa^2 n (n + alpha + beta + 1) = l(l+1)
    for n in range(1, 9):
        assert eigenvalue_lambda_n(s2, n) == pytest.approx(n * (n + 1), rel=1e-14)


def test_gauss_legendre_two_point():
    rule = gauss_jacobi_rule((0.0, 0.0), 2)
    assert rule.nodes == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)], rel=1e-14)
    assert rule.weights == pytest.approx([1.0, 1.0], rel=1e-14)


def test_gauss_odd_symmetry():
    rule = gauss_jacobi_rule((0.0, 0.0), 8)
    assert abs(rule.integrate(lambda t: t**15)) < 1e-14


def test_gauss_norm_h5():
    rule = gauss_jacobi_rule((2.0, 0.0), 16)
    val = rule.integrate(lambda t: jacobi_eval((2.0, 0.0), 5, t) ** 2)
    h5 = (
        2**3
        / (2 * 5 + 3)
        * math.gamma(5 + 3)
        * math.gamma(5 + 1)
        / (math.gamma(5 + 3) * math.factorial(5))
    )
    assert h5 == pytest.approx(8 / 13, rel=1e-15)
    assert val == pytest.approx(h5, rel=1e-12)
    # norm_sq is against the probability measure, i.e. divided by the mass
    assert jacobi_norm_sq((2.0, 0.0), 5) == pytest.approx(
        h5 / weight_total_mass((2.0, 0.0)), rel=1e-12
    )


def jacobi_h(a, b, k):
    return (
        2 ** (a + b + 1)
        / (2 * k + a + b + 1)
        * math.gamma(k + a + 1)
        * math.gamma(k + b + 1)
        / (math.gamma(k + a + b + 1) * math.factorial(k))
    )


@pytest.mark.parametrize("params", [(0.0, 0.0), (2.0, 0.0), (3.0, 1.0), (0.5, -0.5), (7.0, 3.0)])
def test_quadrature_rule_invariants(params):
    m = 14
    rule = gauss_jacobi_rule(params, m)
    nodes = np.asarray(rule.nodes)
    assert np.all(np.diff(nodes) > 0)
    assert nodes[0] > -1 and nodes[-1] < 1
    assert np.all(np.asarray(rule.weights) > 0)
    assert rule.total_mass() == pytest.approx(weight_total_mass(params), rel=1e-13)
    # exact for every polynomial of degree <= 2m-1: the Jacobi basis suffices
    for k in range(1, 2 * m):
        val = rule.integrate(lambda t, k=k: jacobi_eval(params, k, t))
        assert abs(val) < 1e-13 * rule.total_mass()
    for k in range(m):
        val = rule.integrate(lambda t, k=k: jacobi_eval(params, k, t) ** 2)
        assert val == pytest.approx(jacobi_h(*params, k), rel=1e-13)
    val = rule.integrate(lambda t: jacobi_eval(params, 3, t) * jacobi_eval(params, 8, t))
    assert abs(val) < 1e-13 * rule.total_mass()


def test_rule_mp_matches_float():
    nodes, weights = gauss_jacobi_rule_mp((1.0, -0.5), 10)
    rule = gauss_jacobi_rule((1.0, -0.5), 10)
    for i in range(10):
        assert float(nodes[i]) == pytest.approx(rule.nodes[i], abs=1e-13)
        assert float(weights[i]) == pytest.approx(rule.weights[i], rel=1e-13)


@pytest.mark.parametrize("space", CATALOG_PARAMS, ids=CATALOG)
def test_orthogonality_property(space):
    """Quadrature of P_n P_k against the normalized weight vanishes off the diagonal."""
    rule = gauss_jacobi_rule(space, 26)
    t = np.asarray(rule.nodes)
    w = np.asarray(rule.weights) / rule.total_mass()
    table = np.array([jacobi_eval_all(space, 24, ti) for ti in t])
    gram = table.T * w @ table
    off = gram - np.diag(np.diag(gram))
    scale = np.sqrt(np.outer(np.diag(gram), np.diag(gram)))
    assert np.max(np.abs(off) / scale) < 1e-11


@pytest.mark.parametrize("space", CATALOG_PARAMS, ids=CATALOG)
def test_normalization_consistency(space):
    # (m_n / P_n(1)^2) * integral of P_n^2 dmu = 1: the coefficient map
    # applied to P_n itself returns exactly 1
    rule = gauss_jacobi_rule(space, 30)
    t = np.asarray(rule.nodes)
    w = np.asarray(rule.weights) / rule.total_mass()
    for n in range(25):
        pn = np.array([jacobi_eval(space, n, ti) for ti in t])
        val = dim_m_n(space, n) / jacobi_value_at_one(space, n) ** 2 * float(np.dot(w, pn**2))
        assert val == pytest.approx(1.0, rel=1e-10)


KOORNWINDER_CASES = [
    (2.0, 0.0),
    (3.0, 1.0),
    (7.0, 3.0),
    (1.0, -0.5),
    (6.0, -0.5),
]


@pytest.mark.parametrize("params", KOORNWINDER_CASES)
def test_koornwinder_against_recurrence(params):
    for theta in (0.01, 0.2, math.pi / 6, math.pi / 4, 1.0, 1.5):
        assert koornwinder_p_n(params, 0, theta) == pytest.approx(1.0, abs=1e-12)
        for n in (1, 2, 3, 5, 8, 12, 20):
            want = jacobi_normalized(params, n, math.cos(2 * theta))[n]
            assert koornwinder_p_n(params, n, theta) == pytest.approx(want, abs=1e-8)


def test_koornwinder_named_examples():
    got = koornwinder_p_n((2.0, 0.0), 3, math.pi / 6)
    assert got == pytest.approx(jacobi_normalized((2.0, 0.0), 3, math.cos(math.pi / 3))[3], abs=1e-8)
    got = koornwinder_p_n((1.0, -0.5), 2, math.pi / 4)
    assert got == pytest.approx(jacobi_normalized((1.0, -0.5), 2, 0.0)[2], abs=1e-8)
    with pytest.raises(ValueError):
        koornwinder_p_n((2.0, -0.3), 2, 0.5)


PN_BOUND_PARAMS = [(5.0, 0.0), (8.0, 1.0), (10.0, 3.0), (6.0, -0.5)]


@pytest.mark.parametrize("params", PN_BOUND_PARAMS)
def test_pn_bounds(params):
    """Decay bounds for normalized values away from theta = 0."""
    a, b = params
    theta0 = 0.3
    thetas = np.arange(theta0, math.pi / 2 + 1e-12, 0.05)
    for n in range(1, 41):
        bound1 = math.gamma(a + 1) / (math.gamma(b + 1) * (n * math.sin(theta0) ** 2) ** (a - b))
        cond2 = n * math.tan(theta0) ** 2 < a - b - 1
        if cond2:
            bound2 = (
                math.gamma(a + 1)
                / math.gamma(a - b)
                * math.cos(theta0) ** (2 * n)
                / (a - b - 1 - n * math.tan(theta0) ** 2) ** (b + 1)
            )
        for th in thetas:
            val = abs(jacobi_normalized(params, n, math.cos(2 * th))[n])
            assert val <= bound1 * (1 + 1e-12)
            if cond2:
                assert val <= bound2 * (1 + 1e-12)


def test_uniform_limit_property():
    # p_n^{(alpha,-1/2)}(cos 2 theta) -> cos^{2n} theta as alpha grows;
    # the sup-gap shrinks monotonically along a doubling alpha ladder
    thetas = np.linspace(0.0, math.pi / 2, 181)
    for n in range(1, 7):  # n = 0 is identically zero gap
        gaps = []
        for a in (10.0, 20.0, 40.0, 80.0, 160.0):
            vals = np.array(
                [jacobi_normalized((a, -0.5), n, math.cos(2 * th))[n] for th in thetas]
            )
            gaps.append(np.max(np.abs(vals - np.cos(thetas) ** (2 * n))))
        assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.02


def test_pochhammer():
    assert pochhammer(3.0, 0) == 1.0
    assert pochhammer(3.0, 4) == pytest.approx(3 * 4 * 5 * 6, rel=1e-15)
    assert float(pochhammer(mp.mpf(2), 3)) == 24.0
