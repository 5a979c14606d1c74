import numpy as np
import pytest
from hypothesis import given, strategies as st
import mpmath as mp
from scipy import integrate
from scipy.special import eval_legendre

from gangolli.errors import DivergenceWarning, InvalidMeasure
from gangolli.levy import (LevyKernel, SphericalSymbol, ZonalLevyMeasure, build_symbol_table,
                           constant_field, diffusion_field, growth_bound_check, multiplier_field,
                           one_minus_legendre_over_theta2,
                           sugiura_zeta, symbol_eta, truncation_tail, validate_levy)
from gangolli.spectral import ZonalFunction


def _exact_density_exponent(scale, alpha, l):
    """int_0^pi scale theta^(-1-alpha) (1 - P_l(cos theta)) dtheta in 60-digit arithmetic.

    The substitution theta = v^p with p = 1/(2 - alpha) makes the integrand
    bounded at 0; below theta = 1e-6 the two-term Taylor expansion of
    1 - P_l is used (neglected term O(l^6 theta^6)).
    """
    L = l * (l + 1)
    with mp.workdps(60):
        p = 1 / (2 - mp.mpf(alpha))

        def f(v):
            t = v ** p
            if t < mp.mpf("1e-6"):
                omp = L * t ** 2 / 4 - (mp.mpf(L) / 48 + mp.mpf(L) * (L - 2) / 64) * t ** 4
            else:
                omp = 1 - mp.legendre(l, mp.cos(t))
            return scale * p * v ** (p - 1) * t ** (-1 - alpha) * omp

        cuts = [mp.mpf(x) ** (1 / p) for x in ("1e-6", "1e-3", "1e-2", "0.1", "1")]
        return float(mp.quad(f, [0, *cuts, mp.pi ** (1 / p)]))


def test_validate_atom_only():
    rep = validate_levy(ZonalLevyMeasure.atom(np.pi, 1.0))
    assert rep.valid and rep.first_moment_finite
    assert rep.mass_outside == 1.0 and rep.second_moment == 0.0


def test_validate_half_exponent_density():
    rep = validate_levy(ZonalLevyMeasure.power_law(1.0, 0.5))
    assert rep.valid and rep.first_moment_finite
    # int_0^0.1 theta^2 theta^(-1.5) dtheta
    assert rep.second_moment == pytest.approx(0.1 ** 1.5 / 1.5, rel=1e-10)
    # mass outside the neighbourhood: int_0.1^pi theta^(-1.5)
    assert rep.mass_outside == pytest.approx(2 * (0.1 ** -0.5 - np.pi ** -0.5), rel=1e-10)


def test_validate_exponent_two_rejected():
    with pytest.raises(InvalidMeasure) as exc:
        validate_levy(ZonalLevyMeasure.power_law(1.0, 2.0))
    assert any("second moment" in f for f in exc.value.failures)
    rep = validate_levy(ZonalLevyMeasure.power_law(1.0, 2.0), strict=False)
    assert not rep.second_moment_finite and rep.second_moment == np.inf


def test_validate_rejects_atom_at_identity_and_mislabelled_density():
    with pytest.raises(InvalidMeasure):
        validate_levy(ZonalLevyMeasure(atoms=((0.0, 1.0),)))
    lying = ZonalLevyMeasure(density=lambda t: np.asarray(t) ** -2.5, alpha=0.5)
    with pytest.raises(InvalidMeasure):
        validate_levy(lying)


def test_first_moment_flags():
    assert ZonalLevyMeasure.power_law(1.0, 0.9).first_moment_finite
    assert not ZonalLevyMeasure.power_law(1.0, 1.5).first_moment_finite
    validate_levy(ZonalLevyMeasure.power_law(1.0, 1.5))


def test_symbol_examples():
    heat = constant_field(1.0)
    for l in range(10):
        assert symbol_eta(heat, None, 0.7, l) == l * (l + 1)
    kern = LevyKernel(ZonalLevyMeasure.power_law(0.3, 0.5, atoms=((1.0, 0.2),)))
    assert symbol_eta(diffusion_field(0.4, 0.3), kern, 1.1, 0) == 0.0
    c = 0.7
    anti = LevyKernel(ZonalLevyMeasure.atom(np.pi, c))
    for l in range(8):
        expect = 0.0 if l % 2 == 0 else 2 * c
        assert symbol_eta(constant_field(0.0), anti, 0.3, l) == pytest.approx(expect, abs=1e-14)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 1.0, 1.5, 1.9])
def test_density_symbol_against_exact_integral(alpha):
    nu = ZonalLevyMeasure.power_law(0.25, alpha)
    J = nu.jump_exponent(40)
    for l in (1, 2, 7, 40):
        assert J[l] == pytest.approx(_exact_density_exponent(0.25, alpha, l), rel=1e-10)


def test_small_angle_series_against_direct_evaluation():
    th = np.array([0.01, 0.05, 0.1])
    v = one_minus_legendre_over_theta2(30, th)
    for l in (1, 4, 30):
        np.testing.assert_allclose(v[:, l], (1 - eval_legendre(l, np.cos(th))) / th ** 2, rtol=1e-9)
    small = one_minus_legendre_over_theta2(10, np.array([1e-7]))
    np.testing.assert_allclose(small[0], np.arange(11) * np.arange(1, 12) / 4, rtol=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_adaptive_and_fixed_quadrature_agree(alpha):
    nu = ZonalLevyMeasure.power_law(0.2, alpha, atoms=((2.0, 0.3),))
    a = nu.jump_exponent(200, method="adaptive")
    b = nu.jump_exponent(200, method="fixed")
    assert np.max(np.abs(a - b)) <= 1e-8


def test_symbol_table_examples():
    grid = np.linspace(0, np.pi, 7)
    heat = build_symbol_table(constant_field(0.5), None, grid, 10)
    assert np.all(heat.eta == heat.eta[0])
    np.testing.assert_array_equal(heat.eta[0], 0.5 * np.arange(11) * np.arange(1, 12))
    kern = LevyKernel(ZonalLevyMeasure.atom(2.0, 1.0), multiplier_field(1.0, 0.5))
    sym = build_symbol_table(constant_field(0.0), kern, np.array([0.0, np.pi]), 6)
    np.testing.assert_allclose(sym.eta[0, 1:], 3 * sym.eta[1, 1:], rtol=1e-14)
    zero = build_symbol_table(constant_field(2.0), kern, grid, 0)
    assert zero.eta.shape == (7, 1) and np.all(zero.eta == 0)
    assert zero.provenance["L"] == 0


def test_symbol_table_nonnegative_and_rows():
    kern = LevyKernel(ZonalLevyMeasure.power_law(0.1, 1.2, atoms=((np.pi, 0.4),)), multiplier_field(1.0, -0.9))
    sym = build_symbol_table(diffusion_field(0.2, 0.5), kern, np.linspace(0, np.pi, 9), 40)
    assert np.all(sym.eta >= 0) and np.all(sym.eta[:, 0] == 0)
    rows = list(sym.rows())
    assert len(rows) == 9 * 41 and rows[1] == (0.0, 1, sym.eta[0, 1])


@given(st.floats(0.05, np.pi), st.floats(0.01, 2.0), st.floats(0, np.pi))
def test_adding_atom_never_decreases_symbol(theta, mass, s):
    base = ZonalLevyMeasure.power_law(0.1, 0.5, atoms=((1.3, 0.5),))
    more = ZonalLevyMeasure.power_law(0.1, 0.5, atoms=((1.3, 0.5), (theta, mass)))
    a = diffusion_field(0.3, 0.2)
    ta = build_symbol_table(a, LevyKernel(base), [s], 30).eta
    tb = build_symbol_table(a, LevyKernel(more), [s], 30).eta
    assert np.all(tb[:, 1:] >= ta[:, 1:] - 1e-12)


def test_growth_examples():
    heat = build_symbol_table(constant_field(1.0), None, [0.0], 400)
    rep = growth_bound_check(heat)
    assert rep.passed
    l = 400
    assert rep.ratios[-1] == pytest.approx(l * (l + 1) / (1 + l ** 2 + l ** 1.5), rel=1e-14)
    assert abs(rep.ratios[-1] - 1) < 0.06
    anti = build_symbol_table(constant_field(0.0), LevyKernel(ZonalLevyMeasure.atom(np.pi, 1.0)), [0.0], 400)
    rep = growth_bound_check(anti)
    assert rep.passed and rep.ratios[-1] < 1e-4
    empty = build_symbol_table(constant_field(1.0), None, [0.0], 0)
    assert growth_bound_check(empty).C_fit == 0.0


def test_growth_detects_superquadratic_symbol():
    l = np.arange(201.0)
    sym = SphericalSymbol(np.array([0.0]), (l ** 3)[None, :])
    rep = growth_bound_check(sym, window=(50, 200))
    assert not rep.passed and rep.slope == pytest.approx(1.0, abs=0.05)


def test_zeta_examples():
    partial, tail = sugiura_zeta(1.0, 10 ** 6)
    err = np.pi ** 2 / 6 - partial
    assert 0 <= err <= tail and err <= 1e-6
    with pytest.warns(DivergenceWarning):
        _, tail = sugiura_zeta(0.4, 100)
    assert tail == np.inf
    assert sugiura_zeta(1.0, 1) == (1.0, 1.0)


@given(st.floats(0.6, 3.0), st.integers(1, 5000))
def test_zeta_tail_bounds_remainder(s, n):
    from scipy.special import zeta
    partial, tail = sugiura_zeta(s, n)
    assert -1e-12 <= zeta(2 * s) - partial <= tail * (1 + 1e-9) + 1e-12


def test_truncation_tail_examples(rng):
    heat = build_symbol_table(constant_field(1.0), None, [0.0, 1.0], 5)
    f = ZonalFunction(np.eye(6)[3])
    assert truncation_tail(f, heat, 5) == 0.0
    assert truncation_tail(f, heat, 2) == 84.0
    g = ZonalFunction(rng.normal(size=6))
    assert truncation_tail(g * 2.0, heat, 1) == pytest.approx(2 * truncation_tail(g, heat, 1), rel=1e-15)


def test_kernel_integrate_zonal_test_function():
    nu = ZonalLevyMeasure.power_law(0.2, 0.5, atoms=((2.0, 0.7),))
    kern = LevyKernel(nu, multiplier_field(1.0, 0.5))
    from gangolli.geometry import rot_y
    phi = lambda th: np.where(th > 0.1, (th - 0.1) ** 3, 0.0) * np.cos(th) ** 2  # noqa: E731
    h = lambda mats: phi(np.arccos(np.clip(mats[:, 2, 2], -1, 1)))  # noqa: E731
    s = 0.9
    expect = (1 + 0.5 * np.cos(s)) * (0.7 * phi(2.0) + integrate.quad(
        lambda t: 0.2 * t ** -1.5 * phi(t), 0.1, np.pi, epsabs=1e-13)[0])
    assert kern.integrate(rot_y(s), h) == pytest.approx(expect, rel=1e-10)


def test_kernel_rejects_negative_multiplier():
    with pytest.raises(InvalidMeasure):
        LevyKernel(ZonalLevyMeasure.atom(1.0, 1.0), multiplier_field(0.5, 1.0)).validate()


def test_sample_angles_distribution(rng):
    nu = ZonalLevyMeasure(atoms=((1.0, 1.0), (2.0, 3.0)), density=lambda t: np.full(np.shape(t), 2.0 / np.pi))
    assert nu.finite_activity and nu.total_mass() == pytest.approx(6.0, rel=1e-12)
    x = nu.sample_angles(rng, 200_000)
    assert np.mean(x == 1.0) == pytest.approx(1 / 6, abs=0.005)
    assert np.mean(x == 2.0) == pytest.approx(1 / 2, abs=0.005)
    dens = x[(x != 1.0) & (x != 2.0)]
    assert np.mean(dens) == pytest.approx(np.pi / 2, abs=0.02)


def test_scaled_measure():
    nu = ZonalLevyMeasure.power_law(0.1, 0.5, atoms=((1.0, 1.0),))
    J1 = nu.jump_exponent(10)
    J2 = nu.scaled(2.0).jump_exponent(10)
    np.testing.assert_allclose(J2, 2 * J1, rtol=1e-12)
