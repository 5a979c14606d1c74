import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial.legendre import leggauss
from scipy.special import eval_legendre

from gangolli.errors import DomainError, InsufficientGrid, TooCloseToPole
from gangolli.spectral import (ZonalFunction, composite_rule, gauss_legendre, graded_breakpoints,
                               laplace_eigenvalues, laplacian_direct, laplacian_spectral,
                               legendre_derivative_tables, legendre_eval, legendre_table,
                               random_band_limited, spherical_mean, spherical_transform, synthesis)


def test_legendre_examples():
    x = np.linspace(-1, 1, 11)
    np.testing.assert_array_equal(legendre_eval(0, x), np.ones_like(x))
    for l in range(30):
        assert legendre_eval(l, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert legendre_eval(2, 0.5) == pytest.approx(-0.125, abs=1e-16)


def test_legendre_domain_error():
    with pytest.raises(DomainError):
        legendre_eval(3, 1.0 + 1e-9)
    legendre_eval(3, 1.0 + 1e-13)


@given(st.integers(0, 200), st.floats(-1, 1))
def test_legendre_matches_scipy_and_is_bounded(l, x):
    v = legendre_eval(l, x)
    assert abs(v) <= 1 + 1e-12
    assert v == pytest.approx(eval_legendre(l, x), abs=1e-12)


def test_legendre_derivative_tables_against_scipy():
    x = np.linspace(-0.95, 0.95, 9)
    P, dP, d2P = legendre_derivative_tables(10, x)
    for l in range(11):
        c = np.zeros(l + 1); c[l] = 1
        np.testing.assert_allclose(P[:, l], eval_legendre(l, x), atol=1e-14)
        np.testing.assert_allclose(dP[:, l], np.polynomial.legendre.legval(x, np.polynomial.legendre.legder(c)), atol=1e-12)
        np.testing.assert_allclose(d2P[:, l], np.polynomial.legendre.legval(x, np.polynomial.legendre.legder(c, 2)), atol=1e-10)


def test_gauss_legendre_examples():
    r1 = gauss_legendre(1)
    np.testing.assert_array_equal(r1.nodes, [0.0]); np.testing.assert_array_equal(r1.weights, [2.0])
    r2 = gauss_legendre(2)
    np.testing.assert_allclose(r2.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-16)
    assert r2.integrate(r2.nodes ** 2) == pytest.approx(2 / 3, abs=1e-15)
    with pytest.raises(ValueError):
        gauss_legendre(0)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 17, 32, 64, 130, 200])
def test_gauss_legendre_rule(n):
    r = gauss_legendre(n)
    ref_x, ref_w = leggauss(n)
    np.testing.assert_allclose(r.nodes, ref_x, atol=1e-15)
    np.testing.assert_allclose(r.weights, ref_w, atol=1e-14)
    assert abs(r.weights.sum() - 2) <= 1e-12
    # Newton step size: root located to machine precision
    Pn = eval_legendre(n, r.nodes)
    dPn = n * (r.nodes * Pn - eval_legendre(n - 1, r.nodes)) / (r.nodes ** 2 - 1)
    assert np.max(np.abs(Pn / dPn)) <= 1e-15
    if n <= 32:
        assert np.max(np.abs(Pn)) <= 1e-14
    for d in (0, 1, 2 * n - 2, 2 * n - 1):
        exact = 0.0 if d % 2 else 2 / (d + 1)
        assert r.integrate(r.nodes ** d) == pytest.approx(exact, abs=1e-12)


def test_composite_rule_and_graded_breakpoints():
    b = graded_breakpoints(1e-3)
    assert b[0] == 1e-3 and b[-1] == np.pi and np.all(np.diff(b) > 0)
    x, w = composite_rule(b, 16)
    assert np.sum(w * np.sin(x)) == pytest.approx(1 + np.cos(1e-3), abs=1e-13)


def test_transform_examples():
    L = 8
    one = ZonalFunction.from_callable(lambda th: np.ones_like(th), L)
    c = spherical_transform(one, L)
    assert c[0] == pytest.approx(1, abs=1e-15)
    assert np.max(np.abs(c[1:])) <= 1e-15
    p2 = ZonalFunction.from_callable(lambda th: eval_legendre(2, np.cos(th)), L)
    c = spherical_transform(p2, L)
    np.testing.assert_allclose(c, np.eye(L + 1)[2] / 5, atol=1e-15)
    f = ZonalFunction.from_callable(lambda th: eval_legendre(1, np.cos(th)) + eval_legendre(3, np.cos(th)), L)
    c = spherical_transform(f, L)
    expect = np.zeros(L + 1); expect[1] = 1 / 3; expect[3] = 1 / 7
    np.testing.assert_allclose(c, expect, atol=1e-15)


def test_transform_insufficient_grid():
    f = ZonalFunction(samples=np.ones(4), rule=gauss_legendre(4), band_limit=3)
    with pytest.raises(InsufficientGrid):
        spherical_transform(f, 4)


def test_synthesis_examples():
    th = np.linspace(0, np.pi, 17)
    one = synthesis(np.eye(6)[0])
    np.testing.assert_allclose(one(th), 1.0, atol=1e-15)
    p2 = synthesis(np.eye(6)[2] / 5)
    np.testing.assert_allclose(p2(th), eval_legendre(2, np.cos(th)), atol=1e-15)


@pytest.mark.parametrize("L", [0, 1, 5, 32, 64])
def test_round_trip(L, rng):
    f = random_band_limited(rng, L)
    F = ZonalFunction(samples=f.samples, rule=f.rule, band_limit=L)
    np.testing.assert_allclose(spherical_transform(F, L), f.coeffs, atol=1e-14)
    th = np.linspace(0, np.pi, 501)
    assert np.max(np.abs(synthesis(F.coeffs)(th) - f(th))) <= 1e-10


def test_parseval(rng):
    f = random_band_limited(rng, 24)
    l = np.arange(25)
    lhs = np.sum((2 * l + 1) * f.coeffs ** 2)
    x, w = leggauss(60)
    rhs = 0.5 * np.sum(w * f.eval_cos(x) ** 2)
    assert abs(lhs - rhs) <= 1e-10


def test_laplacian_spectral_examples():
    assert np.all(laplacian_spectral(ZonalFunction.constant(1.0, 4)).coeffs == 0)
    np.testing.assert_allclose(laplacian_spectral(ZonalFunction.spherical(1, 4)).coeffs,
                               -2 * ZonalFunction.spherical(1, 4).coeffs, atol=1e-15)
    np.testing.assert_allclose(laplacian_spectral(ZonalFunction.spherical(3, 4)).coeffs,
                               -12 * ZonalFunction.spherical(3, 4).coeffs, atol=1e-15)
    np.testing.assert_array_equal(laplace_eigenvalues(3), [0, 2, 6, 12])


def test_laplacian_direct_examples(rng):
    assert laplacian_direct(ZonalFunction.constant(1.0, 3), 1.0) == 0.0
    assert laplacian_direct(ZonalFunction.spherical(2, 2), np.pi / 2) == pytest.approx(3.0, abs=1e-13)
    f = random_band_limited(rng, 20)
    assert laplacian_direct(f, 1.0) == pytest.approx(float(laplacian_spectral(f)(1.0)), abs=1e-8)
    with pytest.raises(TooCloseToPole):
        laplacian_direct(f, 5e-4)
    with pytest.raises(TooCloseToPole):
        laplacian_direct(f, np.pi - 5e-4)


def test_laplacian_direct_matches_spectral_away_from_poles(rng):
    s = np.linspace(0.01, np.pi - 0.01, 50)
    for _ in range(5):
        f = random_band_limited(rng, 32)
        np.testing.assert_allclose(laplacian_direct(f, s), laplacian_spectral(f)(s), atol=1e-8)


def test_spherical_mean_examples():
    f = ZonalFunction.spherical(4, 6)
    assert spherical_mean(f, 0.0, 1.2) == pytest.approx(float(f(1.2)), abs=1e-15)
    assert spherical_mean(ZonalFunction.constant(1.0, 3), 0.8, 2.0) == pytest.approx(1.0, abs=1e-15)


@given(st.integers(0, 40), st.floats(0, np.pi), st.floats(0, np.pi))
def test_functional_equation(l, theta, s):
    f = ZonalFunction.spherical(l, l)
    expect = legendre_eval(l, np.cos(theta)) * legendre_eval(l, np.cos(s))
    assert spherical_mean(f, theta, s) == pytest.approx(expect, abs=1e-10)


def test_spherical_mean_broadcasts():
    f = ZonalFunction.spherical(3, 3)
    th = np.array([0.1, 0.5, 1.0])
    s = np.array([[0.2], [2.0]])
    out = spherical_mean(f, th, s)
    assert out.shape == (2, 3)
    np.testing.assert_allclose(out, eval_legendre(3, np.cos(th)) * eval_legendre(3, np.cos(s)), atol=1e-12)


def test_zonal_function_views_and_arithmetic(rng):
    f = random_band_limited(rng, 10)
    g = random_band_limited(rng, 6)
    th = np.linspace(0, np.pi, 33)
    np.testing.assert_allclose((f + g)(th), f(th) + g(th), atol=1e-13)
    np.testing.assert_allclose((f * 2.5)(th), 2.5 * f(th), atol=1e-13)
    np.testing.assert_allclose((-f)(th), -f(th), atol=1e-15)
    F, dF, d2F = f.derivatives(np.array([0.7]))
    h = 1e-4
    assert dF[0] == pytest.approx((f(0.7 + h) - f(0.7 - h)) / (2 * h), abs=1e-7)
    assert d2F[0] == pytest.approx((f(0.7 + h) - 2 * f(0.7) + f(0.7 - h)) / h ** 2, abs=1e-5)
    assert f.sup_norm() >= np.max(np.abs(f(th))) - 1e-12


def test_legendre_table_shape():
    T = legendre_table(5, np.zeros((2, 3)))
    assert T.shape == (2, 3, 6)
