import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gangolli.errors import InfiniteActivity
from gangolli.levy import LevyKernel, ZonalLevyMeasure, constant_field
from gangolli.operators import GangolliCoefficients, gangolli_apply_spectral
from gangolli.semigroup import (BLOCK_SIZE, LevyProcessParams, constant_symbol, fitted_exponent,
                                lk_verify, mc_spherical_moment, semigroup_apply, simulate_path)
from gangolli.spectral import ZonalFunction, random_band_limited

DENSE = np.linspace(0, np.pi, 2001)
STABLE_LIKE = ZonalLevyMeasure.power_law(0.1, 1.2)


def test_semigroup_examples(rng):
    eta = constant_symbol(0.5, ZonalLevyMeasure.atom(2.0, 0.3), 12)
    f = random_band_limited(rng, 12)
    np.testing.assert_array_equal(semigroup_apply(eta, 0.0, f).coeffs, f.coeffs)
    two = semigroup_apply(eta, 0.3, semigroup_apply(eta, 0.4, f))
    np.testing.assert_allclose(two.coeffs, semigroup_apply(eta, 0.7, f).coeffs, rtol=1e-14)
    p1 = ZonalFunction.spherical(1)
    out = semigroup_apply(constant_symbol(0.5, None, 1), 1.0, p1)
    assert out.coeffs[1] / p1.coeffs[1] == pytest.approx(0.367879441171442, rel=1e-14)


def test_semigroup_rejects_bad_input():
    f = ZonalFunction.spherical(3)
    with pytest.raises(ValueError):
        semigroup_apply(np.zeros(2), 1.0, f)
    with pytest.raises(ValueError):
        semigroup_apply(np.zeros(4), -1.0, f)


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.0, 3.0))
def test_contraction_and_positivity(seed, t):
    rng = np.random.default_rng(seed)
    atom = ZonalLevyMeasure.atom(rng.uniform(0.1, np.pi), rng.uniform(0, 1))
    eta = constant_symbol(rng.uniform(0, 1), atom, 24) + STABLE_LIKE.jump_exponent(24)
    f = random_band_limited(rng, 12)
    Tf = semigroup_apply(eta, t, f)
    assert np.max(np.abs(Tf(DENSE))) <= np.max(np.abs(f(DENSE))) + 1e-9
    # a nonnegative band-limited function: the square of a degree-12 polynomial in cos
    g = ZonalFunction.from_callable(lambda th: f(th) ** 2, 24)
    assert np.min(semigroup_apply(eta, t, g)(DENSE)) >= -1e-6


def test_generator_consistency(rng):
    a, nu = 0.4, ZonalLevyMeasure.atom(2.0, 0.6)
    eta = constant_symbol(a, nu, 16)
    f = random_band_limited(rng, 16)
    dt = 1e-3
    lhs = ((semigroup_apply(eta, dt, f) - f) * (1 / dt))(DENSE)
    co = GangolliCoefficients(a=constant_field(a), kernel=LevyKernel(nu))
    Af = gangolli_apply_spectral(co, f, DENSE)
    assert np.max(np.abs(lhs - Af)) <= 5e-2 * np.max(np.abs(Af))


def test_params_validation():
    with pytest.raises(ValueError):
        LevyProcessParams(a=-1.0)
    with pytest.raises(ValueError):
        LevyProcessParams(dt=0.1)
    with pytest.raises(ValueError):
        LevyProcessParams(n_paths=0)


def test_still_process_stays_at_pole():
    (sample,) = simulate_path(LevyProcessParams(t_grid=(0.5,), dt=1e-2, n_paths=500))
    np.testing.assert_array_equal(sample.points, np.tile([0.0, 0.0, 1.0], (500, 1)))
    assert mc_spherical_moment(sample, 4) == (1.0, 0.0)
    assert mc_spherical_moment(sample, 0) == (1.0, 0.0)
    rep = lk_verify(LevyProcessParams(t_grid=(0.5,), dt=1e-2, n_paths=500), 3, samples=[sample])
    assert all(r.z == 0.0 for r in rep.rows)


def test_antipodal_jumps_alternate():
    params = LevyProcessParams(nu=ZonalLevyMeasure.atom(np.pi, 1.0), t_grid=(0.3,), dt=1e-2, n_paths=3000, seed=5)
    (sample,) = simulate_path(params)
    z = sample.points[:, 2]
    np.testing.assert_allclose(np.abs(z), 1.0, atol=1e-12)
    np.testing.assert_array_equal(z > 0, sample.jump_counts % 2 == 0)
    assert 0 < np.mean(z < 0) < 0.5


def test_simulation_is_deterministic_and_thread_independent():
    params = LevyProcessParams(a=0.5, nu=ZonalLevyMeasure.atom(1.0, 2.0), t_grid=(0.05, 0.1), dt=1e-2,
                               n_paths=2 * BLOCK_SIZE + 17, seed=9)
    a = simulate_path(params)
    b = simulate_path(params)
    c = simulate_path(params, threads=3)
    for x, y, z in zip(a, b, c):
        assert x.points.tobytes() == y.points.tobytes() == z.points.tobytes()
        np.testing.assert_array_equal(x.jump_counts, z.jump_counts)
    other = simulate_path(LevyProcessParams(a=0.5, t_grid=(0.05,), dt=1e-2, n_paths=100, seed=10))
    assert not np.array_equal(other[0].points, a[0].points[:100])


def test_simulation_rejects_infinite_activity():
    with pytest.raises(InfiniteActivity):
        simulate_path(LevyProcessParams(nu=ZonalLevyMeasure.power_law(0.1, 0.5), n_paths=10))


def test_bounded_density_is_simulated():
    nu = ZonalLevyMeasure(density=lambda t: np.full(np.shape(t), 0.5), label="flat")
    params = LevyProcessParams(nu=nu, t_grid=(1.0,), dt=1e-2, n_paths=40_000, seed=2)
    rep = lk_verify(params, 3)
    assert all(abs(r.z) <= 4 for r in rep.rows)


def test_heat_moment_small_run():
    params = LevyProcessParams(a=0.5, t_grid=(0.2,), dt=2e-3, n_paths=20_000, seed=3)
    rep = lk_verify(params, 3)
    assert all(abs(r.z) <= 4 for r in rep.rows)


def test_weak_step_consistency():
    base = dict(a=0.5, nu=ZonalLevyMeasure.atom(2.0, 0.5), t_grid=(0.4,), n_paths=30_000)
    coarse = simulate_path(LevyProcessParams(dt=1e-2, seed=21, **base))[0]
    fine = simulate_path(LevyProcessParams(dt=2.5e-3, seed=22, **base))[0]
    for l in (1, 2, 3):
        m1, s1 = mc_spherical_moment(coarse, l)
        m2, s2 = mc_spherical_moment(fine, l)
        assert abs(m1 - m2) <= 3 * np.hypot(s1, s2)


def test_doubling_jump_mass_doubles_fitted_exponent():
    def fit(mass, seed):
        params = LevyProcessParams(nu=ZonalLevyMeasure.atom(2 * np.pi / 3, mass), t_grid=(1.0,), dt=1e-2,
                                   n_paths=40_000, seed=seed)
        row = lk_verify(params, 1).rows[0]
        return fitted_exponent(row), row.stderr / (row.estimate * row.t)
    f1, e1 = fit(0.4, 1)
    f2, e2 = fit(0.8, 2)
    assert abs(f2 - 2 * f1) <= 4 * np.hypot(e2, 2 * e1)
    assert f1 == pytest.approx(0.4 * 1.5, abs=4 * e1)
