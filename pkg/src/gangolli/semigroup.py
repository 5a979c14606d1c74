"""Spherical Feller semigroups and Monte-Carlo checks of the Levy-Khintchine formula.

For constant coefficients the transition semigroup acts diagonally on
Legendre coefficients, ``fhat(l) -> exp(-t eta(l)) fhat(l)``, and the
spherical moments of the process started at the north pole satisfy

    E[P_l(cos Theta_t)] = exp(-t eta(l)),   eta(l) = a l(l+1) + int (1 - P_l) dnu.

:func:`simulate_path` produces endpoints by a geodesic random walk with a
compound Poisson jump component, from which :func:`lk_verify` estimates those
moments.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import InfiniteActivity
from .levy import ZonalLevyMeasure
from .spectral import ZonalFunction, laplace_eigenvalues, legendre_eval

BLOCK_SIZE = 8192


def semigroup_apply(eta, t: float, f: ZonalFunction) -> ZonalFunction:
    """Apply ``T_t`` with constant-coefficient symbol ``eta(l)`` to ``f``."""
    eta = np.asarray(eta, dtype=float)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if eta.size < f.band_limit + 1:
        raise ValueError("symbol shorter than the band limit of f")
    if np.any(eta < 0):
        raise ValueError("symbol must be nonnegative")
    return ZonalFunction(np.exp(-t * eta[: f.band_limit + 1]) * f.coeffs)


def constant_symbol(a: float, nu: ZonalLevyMeasure | None, L: int) -> np.ndarray:
    """``eta(l) = a l(l+1) + J_nu(l)`` for ``l = 0..L``."""
    eta = a * laplace_eigenvalues(L)
    if nu is not None and not nu.is_zero:
        eta = eta + nu.jump_exponent(L)
    return eta


@dataclass(frozen=True)
class LevyProcessParams:
    """Parameters of a spherical Levy process with finite jump activity."""

    a: float = 0.0
    nu: ZonalLevyMeasure = ZonalLevyMeasure()
    t_grid: tuple = (1.0,)
    dt: float = 1e-3
    n_paths: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("diffusion constant must be nonnegative")
        if not 0 < self.dt <= 1e-2:
            raise ValueError("dt must lie in (0, 1e-2]")
        if self.n_paths < 1:
            raise ValueError("need at least one path")
        if any(t < 0 for t in self.t_grid):
            raise ValueError("times must be nonnegative")
        object.__setattr__(self, "t_grid", tuple(float(t) for t in self.t_grid))


@dataclass(frozen=True, eq=False)
class PathEndpointSample:
    """Endpoints at time ``t`` of ``N`` independent paths started at the north pole."""

    t: float
    points: np.ndarray
    seed: int
    n_steps: int
    jump_counts: np.ndarray

    @property
    def n_paths(self) -> int:
        return self.points.shape[0]

    @property
    def colatitudes(self) -> np.ndarray:
        p = self.points
        return np.arctan2(np.hypot(p[:, 0], p[:, 1]), p[:, 2])


def _tangent_gaussian(rng, P, scale):
    """Isotropic Gaussian in the tangent plane at each row of ``P``, variance ``scale^2`` per axis."""
    xi = rng.standard_normal(P.shape) * scale
    return xi - np.sum(xi * P, axis=1, keepdims=True) * P


def _geodesic_move(P, direction, length):
    """Move along the great circle leaving ``P`` in unit tangent ``direction``."""
    out = np.cos(length)[:, None] * P + np.sin(length)[:, None] * direction
    return out / np.linalg.norm(out, axis=1, keepdims=True)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _simulate_block(params: LevyProcessParams, block: int, n: int, record_steps):
    rng = _block_rng(params.seed, block)
    nu = params.nu
    rate = 0.0 if nu.is_zero else nu.total_mass()
    sd = np.sqrt(2.0 * params.a * params.dt)
    P = np.tile([0.0, 0.0, 1.0], (n, 1))
    jumps = np.zeros(n, dtype=np.int64)
    snaps = {}
    n_steps = max(record_steps) if record_steps else 0
    if 0 in record_steps:
        snaps[0] = (P.copy(), jumps.copy())
    for step in range(1, n_steps + 1):
        if sd > 0:
            v = _tangent_gaussian(rng, P, sd)
            r = np.linalg.norm(v, axis=1)
            safe = np.where(r > 0, r, 1.0)
            P = _geodesic_move(P, v / safe[:, None], r)
        if rate > 0:
            k = rng.poisson(rate * params.dt, size=n)
            jumps += k
            active = np.nonzero(k)[0]
            while active.size:
                theta = nu.sample_angles(rng, active.size)
                u = _tangent_gaussian(rng, P[active], 1.0)
                u /= np.linalg.norm(u, axis=1, keepdims=True)
                P[active] = _geodesic_move(P[active], u, theta)
                k[active] -= 1
                active = active[k[active] > 0]
        if step in record_steps:
            snaps[step] = (P.copy(), jumps.copy())
    return snaps


def simulate_path(params: LevyProcessParams, threads: int = 1) -> list[PathEndpointSample]:
    """Simulate endpoints at every time in ``params.t_grid``.

    Paths start at the north pole.  Each time step applies a geodesic
    Gaussian step with covariance ``2 a dt I`` in the tangent plane (a projected
    3-D Gaussian), then a
    Poisson number of jumps with angles drawn from ``nu / nu(total)`` in
    uniformly random directions.  Paths are split into fixed blocks of
    ``BLOCK_SIZE`` with a Philox stream per ``(seed, block)``, so the result
    is bit-identical for any number of worker threads.

    Raises
    ------
    InfiniteActivity
        If ``nu`` has infinite total mass.
    """
    if not params.nu.is_zero and not params.nu.finite_activity:
        raise InfiniteActivity("compound Poisson simulation needs a finite Levy measure")
    steps = [int(round(t / params.dt)) for t in params.t_grid]
    record = set(steps)
    sizes = [min(BLOCK_SIZE, params.n_paths - i) for i in range(0, params.n_paths, BLOCK_SIZE)]
    jobs = list(enumerate(sizes))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda j: _simulate_block(params, j[0], j[1], record), jobs))
    else:
        results = [_simulate_block(params, b, n, record) for b, n in jobs]
    out = []
    for t, st in zip(params.t_grid, steps):
        pts = np.concatenate([r[st][0] for r in results])
        jc = np.concatenate([r[st][1] for r in results])
        out.append(PathEndpointSample(t, pts, params.seed, st, jc))
    return out


def mc_spherical_moment(sample: PathEndpointSample, l: int) -> tuple[float, float]:
    """Mean and standard error of ``P_l(cos Theta)`` over the sampled endpoints."""
    if l == 0:
        return 1.0, 0.0
    vals = legendre_eval(l, np.clip(sample.points[:, 2], -1.0, 1.0))
    n = vals.size
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return mean, stderr


@dataclass(frozen=True)
class LKRow:
    l: int
    t: float
    estimate: float
    stderr: float
    predicted: float

    @property
    def z(self) -> float:
        diff = self.estimate - self.predicted
        if self.stderr == 0.0:
            return 0.0 if abs(diff) <= 1e-12 else np.inf * np.sign(diff)
        return diff / self.stderr


@dataclass(frozen=True)
class LKReport:
    rows: tuple
    z_max: float = 3.0

    @property
    def n_within(self) -> int:
        return sum(abs(r.z) <= self.z_max for r in self.rows)

    @property
    def fraction_within(self) -> float:
        return self.n_within / len(self.rows) if self.rows else 1.0


def lk_verify(params: LevyProcessParams, l_max: int, t_list=None, samples=None,
              threads: int = 1, z_max: float = 3.0) -> LKReport:
    """Compare Monte-Carlo spherical moments with ``exp(-t eta(l))`` for ``l = 1..l_max``."""
    if t_list is not None and tuple(t_list) != params.t_grid:
        params = replace(params, t_grid=tuple(t_list))
    if samples is None:
        samples = simulate_path(params, threads=threads)
    eta = constant_symbol(params.a, params.nu, l_max)
    rows = []
    for sample in samples:
        for l in range(1, l_max + 1):
            est, se = mc_spherical_moment(sample, l)
            rows.append(LKRow(l, sample.t, est, se, float(np.exp(-sample.t * eta[l]))))
    return LKReport(tuple(rows), z_max)


def fitted_exponent(row: LKRow) -> float:
    """``-log(estimate) / t``."""
    return -np.log(row.estimate) / row.t
