"""Bi-invariant Levy measures and kernels on S^2, and their spherical symbols.

A zonal Levy measure is a measure ``nu(dtheta)`` on jump angles ``(0, pi]``:
finitely many atoms plus an optional density ``rho(theta)`` behaving like
``theta**(-1 - alpha)`` at the origin.  Lifted to SO(3) it is the
K-bi-invariant measure of ``k exp(theta X1) k'`` with ``k, k'`` Haar on K.

The jump part of the characteristic exponent is

    J(l) = int (1 - P_l(cos theta)) nu(dtheta),

and the symbol of ``a(s) Delta + m(s) nu`` is ``eta(s, l) = a(s) l(l+1) + m(s) J(l)``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi

from .errors import DivergenceWarning, InvalidMeasure
from .geometry import GroupElement, rot_y, rot_z
from .spectral import (
    ZonalFunction,
    composite_rule,
    graded_breakpoints,
    laplace_eigenvalues,
    legendre_table,
)

#: fixed neighbourhood ``U = {theta < NEIGHBOURHOOD}`` of the identity
NEIGHBOURHOOD = 0.1
#: split point for small jumps.  Symbols integrate ``(0, eps)`` exactly with a
#: Gauss-Jacobi rule; the direct operator routes use the mean-value surrogate
#: ``theta^2/4 * Delta f`` there, whose error is ``O(l^4 eps^(4 - alpha))``
SURROGATE_EPS = 1e-3


# ---------------------------------------------------------------------------
# zonal scalar fields

@dataclass(frozen=True)
class CosinePolynomial:
    """Zonal field ``s -> sum_k coeffs[k] cos(s)**k``."""

    coeffs: tuple = (0.0,)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.polynomial.polynomial.polyval(np.cos(s), np.asarray(self.coeffs, dtype=float))
        return out if np.ndim(out) else float(out)

    @property
    def is_constant(self) -> bool:
        return all(c == 0.0 for c in self.coeffs[1:])


def constant_field(value: float) -> CosinePolynomial:
    return CosinePolynomial((float(value),))


def diffusion_field(a0: float, a1: float = 0.0) -> CosinePolynomial:
    """``a(s) = a0 + a1 cos^2 s``."""
    return CosinePolynomial((float(a0), 0.0, float(a1)))


def multiplier_field(m0: float, m1: float = 0.0) -> CosinePolynomial:
    """``m(s) = m0 + m1 cos s``."""
    return CosinePolynomial((float(m0), float(m1)))


def _field_values(field_, s):
    return np.broadcast_to(np.asarray(field_(s), dtype=float), np.shape(s))


# ---------------------------------------------------------------------------
# measures

@dataclass(frozen=True, eq=False)
class ZonalLevyMeasure:
    """Zonal Levy measure on jump angles.

    Parameters
    ----------
    atoms : sequence of (angle, mass)
        Point masses at angles in ``(0, pi]``.
    density : callable, optional
        Vectorized ``rho(theta) >= 0`` on ``(0, pi]``.
    alpha : float, optional
        Declared origin exponent, ``rho(theta) ~ theta**(-1 - alpha)``.  ``None``
        means the density is bounded near the origin (finite activity).
    """

    atoms: tuple = ()
    density: Optional[Callable] = None
    alpha: Optional[float] = None
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple((float(a), float(m)) for a, m in self.atoms))

    @classmethod
    def zero(cls) -> "ZonalLevyMeasure":
        return cls(label="zero")

    @classmethod
    def atom(cls, angle: float, mass: float) -> "ZonalLevyMeasure":
        return cls(atoms=((angle, mass),), label=f"atom({angle:g},{mass:g})")

    @classmethod
    def power_law(cls, scale: float, alpha: float, atoms=()) -> "ZonalLevyMeasure":
        """Density ``scale * theta**(-1 - alpha)`` plus optional atoms."""
        scale, alpha = float(scale), float(alpha)

        def rho(theta):
            return scale * np.asarray(theta, dtype=float) ** (-1.0 - alpha)

        return cls(atoms=atoms, density=rho, alpha=alpha,
                   label=f"power_law({scale:g},{alpha:g})")

    @property
    def atom_angles(self) -> np.ndarray:
        return np.array([a for a, _ in self.atoms], dtype=float)

    @property
    def atom_masses(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms], dtype=float)

    @property
    def has_density(self) -> bool:
        return self.density is not None

    @property
    def is_zero(self) -> bool:
        return not self.has_density and not np.any(self.atom_masses > 0)

    @property
    def first_moment_finite(self) -> bool:
        return not self.has_density or self.alpha is None or self.alpha < 1.0

    @property
    def finite_activity(self) -> bool:
        return not self.has_density or self.alpha is None

    def scaled(self, factor: float) -> "ZonalLevyMeasure":
        rho = None
        if self.density is not None:
            base = self.density
            rho = lambda theta: factor * base(theta)  # noqa: E731
        return ZonalLevyMeasure(atoms=tuple((a, factor * m) for a, m in self.atoms),
                                density=rho, alpha=self.alpha,
                                label=f"{factor:g}*{self.label}")

    # -- integrals ---------------------------------------------------------
    def _origin_profile(self, theta):
        """``rho(theta) theta^(1+alpha)``, bounded near 0 for a correct declaration."""
        expo = 0.0 if self.alpha is None else 1.0 + self.alpha
        theta = np.maximum(np.asarray(theta, dtype=float), 1e-100)
        return self.density(theta) * theta ** expo

    def density_mass(self, lo: float, hi: float = np.pi) -> float:
        if not self.has_density or hi <= lo:
            return 0.0
        if lo == 0.0:
            if not self.finite_activity:
                return np.inf
            return integrate.quad(self.density, 0.0, hi, limit=200)[0]
        nodes, weights = composite_rule(graded_breakpoints(lo, hi, knee=max(lo, min(hi, 0.1))), 20)
        return float(weights @ self.density(nodes))

    def total_mass(self) -> float:
        return float(self.atom_masses.sum()) + self.density_mass(0.0)

    def origin_moment(self, power: float, upper: float) -> float:
        """``int_0^upper theta**power rho(theta) dtheta`` using the declared exponent."""
        if not self.has_density:
            return 0.0
        if self.alpha is None:
            return integrate.quad(lambda t: t ** power * self.density(t), 0.0, upper,
                                  limit=200, epsabs=1e-15, epsrel=1e-13)[0]
        expo = power - 1.0 - self.alpha
        if expo <= -1.0:
            return np.inf
        val = integrate.quad(self._origin_profile, 0.0, upper, weight="alg", wvar=(expo, 0.0),
                             epsabs=1e-15, epsrel=1e-13)[0]
        return float(val)

    def surrogate_weight(self, eps: float = SURROGATE_EPS) -> float:
        """``int_0^eps theta^2 rho(theta) dtheta``; the small-jump contribution per unit ``l(l+1)/4``."""
        return self.origin_moment(2.0, eps)

    def jump_exponent(self, L: int, method: str = "adaptive",
                      eps: float = SURROGATE_EPS) -> np.ndarray:
        """``J(l) = int (1 - P_l(cos theta)) nu(dtheta)`` for ``l = 0..L``.

        ``method`` selects the quadrature for the density on ``[eps, pi]``:
        ``"adaptive"`` (vector-valued adaptive Gauss-Kronrod) or ``"fixed"``
        (composite Gauss-Legendre on graded panels).  On ``(0, eps)`` the
        singular factor is absorbed into a Gauss-Jacobi weight and
        ``1 - P_l`` is summed from its series in ``sin^2(theta/2)``.
        """
        key = (L, method, eps)
        if key in self._cache:
            return self._cache[key]
        J = np.zeros(L + 1)
        if self.atoms:
            P = legendre_table(L, np.cos(self.atom_angles))
            J += self.atom_masses @ (1.0 - P)
        if self.has_density:
            J += self._small_jump_exponent(L, eps)
            if method == "adaptive":
                def integrand(theta):
                    return self.density(theta) * (1.0 - legendre_table(L, np.cos(theta)))

                brk = graded_breakpoints(eps, np.pi, width=0.5)
                part = np.zeros(L + 1)
                for lo, hi in zip(brk[:-1], brk[1:]):
                    part += integrate.quad_vec(integrand, lo, hi, epsabs=1e-14,
                                               epsrel=1e-12, limit=400)[0]
                J += part
            elif method == "fixed":
                nodes, weights = composite_rule(graded_breakpoints(eps, np.pi, width=0.1), 24)
                J += (weights * self.density(nodes)) @ (1.0 - legendre_table(L, np.cos(nodes)))
            else:
                raise ValueError(f"unknown method {method!r}")
        J[0] = 0.0
        J.setflags(write=False)
        self._cache[key] = J
        return J

    def _small_jump_exponent(self, L: int, eps: float, n: int = 40) -> np.ndarray:
        """``int_0^eps (1 - P_l(cos theta)) rho(theta) dtheta`` by Gauss-Jacobi quadrature.

        The weight ``theta^(1 - alpha)`` absorbs the origin singularity; the
        remaining factor ``profile * (1 - P_l)/theta^2`` is smooth on ``(0, eps]``.
        """
        beta = 2.0 if self.alpha is None else 1.0 - self.alpha
        x, w = roots_jacobi(n, 0.0, beta)
        theta = 0.5 * eps * (1.0 + x)
        w = w * (0.5 * eps) ** (1.0 + beta)
        vals = self._origin_profile(theta)[:, None] * one_minus_legendre_over_theta2(L, theta)
        return w @ vals

    def sample_angles(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw ``n`` jump angles from ``nu / nu(total)`` (finite activity only)."""
        masses = self.atom_masses
        dens_mass = self.density_mass(0.0) if self.has_density else 0.0
        total = masses.sum() + dens_mass
        u = rng.random(n)
        out = np.empty(n)
        cum = np.cumsum(np.concatenate([masses, [dens_mass]])) / total
        which = np.searchsorted(cum, u * (1.0 - 1e-15), side="right")
        n_atoms = len(masses)
        for i in range(n_atoms):
            out[which == i] = self.atom_angles[i]
        from_density = which == n_atoms
        if np.any(from_density):
            grid, cdf = self._density_cdf()
            out[from_density] = np.interp(rng.random(int(from_density.sum())), cdf, grid)
        return out

    def _density_cdf(self):
        if "cdf" not in self._cache:
            grid = np.linspace(0.0, np.pi, 4097)
            vals = self.density(np.maximum(grid, 1e-300))
            cdf = np.concatenate([[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(grid))])
            self._cache["cdf"] = (grid, cdf / cdf[-1])
        return self._cache["cdf"]


@dataclass(frozen=True)
class LevyReport:
    no_atom_at_origin: bool
    finite_outside_neighbourhood: bool
    second_moment_finite: bool
    exponent_consistent: bool
    mass_outside: float
    second_moment: float
    first_moment_finite: bool
    failures: tuple

    @property
    def valid(self) -> bool:
        return not self.failures


def validate_levy(nu: ZonalLevyMeasure, delta: float = NEIGHBOURHOOD,
                  strict: bool = True) -> LevyReport:
    """Check the three Levy-measure conditions for a zonal measure.

    Conditions: no mass at the identity, finite mass outside the neighbourhood
    ``{theta < delta}``, and a finite second moment ``int_0^delta theta^2 dnu``.
    Raises :class:`InvalidMeasure` when ``strict`` and any condition fails.
    """
    failures = []
    angles, masses = nu.atom_angles, nu.atom_masses
    no_origin = not np.any((angles <= 0.0) & (masses != 0.0))
    if not no_origin:
        failures.append("atom at the identity")
    if np.any(masses < 0) or np.any(angles > np.pi + 1e-12) or np.any(~np.isfinite(masses)):
        failures.append("atoms must have nonnegative finite mass at angles in (0, pi]")

    consistent = True
    if nu.has_density:
        probe = np.logspace(-8, np.log10(delta), 25)
        profile = nu._origin_profile(probe)
        if np.any(~np.isfinite(profile)) or np.any(profile < 0):
            consistent = False
        elif profile[-1] > 0 and profile[0] / profile[-1] > 1e3:
            consistent = False
        if not consistent:
            failures.append("density not bounded by the declared origin exponent")
        if np.any(nu.density(np.linspace(delta, np.pi, 257)) < 0):
            failures.append("negative density")

    outside = float(masses[angles >= delta].sum()) + nu.density_mass(delta)
    finite_outside = bool(np.isfinite(outside))
    if not finite_outside:
        failures.append("infinite mass away from the identity")

    near = angles < delta
    second = float((angles[near] ** 2 * masses[near]).sum())
    if nu.has_density:
        if not consistent:
            # the declared exponent is wrong, so the moment cannot be trusted
            second = np.nan
        elif nu.alpha is not None and nu.alpha >= 2.0:
            second = np.inf
        else:
            second += nu.origin_moment(2.0, delta)
    second_finite = bool(np.isfinite(second))
    if consistent and not second_finite:
        failures.append("second moment near the identity diverges")

    report = LevyReport(no_atom_at_origin=no_origin, finite_outside_neighbourhood=finite_outside,
                        second_moment_finite=second_finite, exponent_consistent=consistent,
                        mass_outside=outside, second_moment=second,
                        first_moment_finite=nu.first_moment_finite, failures=tuple(failures))
    if strict and failures:
        raise InvalidMeasure(failures, report)
    return report


def one_minus_legendre_over_theta2(L: int, theta) -> np.ndarray:
    """``(1 - P_l(cos theta)) / theta^2`` for ``l = 0..L``, free of cancellation for small ``theta``.

    Uses the terminating series ``P_l(cos theta) = sum_k c_k u^k`` with
    ``u = sin^2(theta/2)``, ``c_{k+1} = c_k (k - l)(k + l + 1)/(k + 1)^2``.
    Intended for ``l * theta`` of order one or less.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    u = np.sin(0.5 * theta)[:, None] ** 2
    l = np.arange(L + 1, dtype=float)[None, :]
    term = np.ones((theta.size, L + 1))
    total = np.zeros_like(term)
    for k in range(min(L, 200)):
        term = term * (k - l) * (k + l + 1) / (k + 1) ** 2 * u
        total -= term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return total / theta[:, None] ** 2


# ---------------------------------------------------------------------------
# kernels

@dataclass(frozen=True, eq=False)
class LevyKernel:
    """Product-form kernel ``mu(g, .) = m(s(g)) * nu_0`` with ``s(g)`` the colatitude of ``g o``."""

    base: ZonalLevyMeasure
    multiplier: Callable = field(default_factory=lambda: constant_field(1.0))

    def m(self, s):
        return _field_values(self.multiplier, s)

    @property
    def first_moment_finite(self) -> bool:
        return self.base.first_moment_finite

    def validate(self, n_grid: int = 2049) -> LevyReport:
        report = validate_levy(self.base)
        m = self.m(np.linspace(0.0, np.pi, n_grid))
        if np.any(m < 0) or np.any(~np.isfinite(m)):
            raise InvalidMeasure(["kernel multiplier negative somewhere"], report)
        return report

    def integrate(self, g: GroupElement, h: Callable, theta_min: float = NEIGHBOURHOOD,
                  n_azimuth: int = 8) -> float:
        """``int h(tau) mu(g, dtau)`` for ``h`` vanishing on ``{theta(tau) < theta_min}``.

        ``h`` takes a stack of rotation matrices ``(n, 3, 3)``.  The lift
        ``tau = rot_z(psi) exp(theta X1) rot_z(phi)`` is averaged over ``psi``
        and ``phi`` with the trapezoid rule.
        """
        thetas, weights = [], []
        keep = self.base.atom_angles >= theta_min
        thetas.append(self.base.atom_angles[keep])
        weights.append(self.base.atom_masses[keep])
        if self.base.has_density:
            nodes, w = composite_rule(np.linspace(theta_min, np.pi, 9), 16)
            thetas.append(nodes)
            weights.append(w * self.base.density(nodes))
        thetas = np.concatenate(thetas)
        weights = np.concatenate(weights)
        if thetas.size == 0:
            return 0.0
        mats = _double_coset_matrices(tuple(thetas.tolist()), n_azimuth)
        vals = h(mats.reshape(-1, 3, 3)).reshape(thetas.size, -1).mean(axis=1)
        return float(self.m(g.colatitude()) * (weights @ vals))


@lru_cache(maxsize=32)
def _double_coset_matrices(thetas: tuple, n: int) -> np.ndarray:
    ang = 2 * np.pi * np.arange(n) / n
    Rz = np.stack([rot_z(a).matrix() for a in ang])
    Ry = np.stack([rot_y(t).matrix() for t in thetas])
    mats = np.einsum("aij,tjk,bkl->tabil", Rz, Ry, Rz)
    mats.setflags(write=False)
    return mats


# ---------------------------------------------------------------------------
# symbols

@dataclass(frozen=True, eq=False)
class SphericalSymbol:
    """Table ``eta[i, l]`` of characteristic exponents over colatitudes ``s[i]``."""

    colatitudes: np.ndarray
    eta: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def band_limit(self) -> int:
        return self.eta.shape[1] - 1

    def max_abs(self) -> np.ndarray:
        """``max_s |eta(s, l)|`` for each ``l``."""
        return np.max(np.abs(self.eta), axis=0)

    def rows(self):
        for i, s in enumerate(self.colatitudes):
            for l, v in enumerate(self.eta[i]):
                yield float(s), l, float(v)


def _jump_part(kernel: Optional[LevyKernel], L: int, method: str = "adaptive"):
    if kernel is None or kernel.base.is_zero:
        return np.zeros(L + 1)
    return kernel.base.jump_exponent(L, method=method)


def symbol_eta(a: Callable, kernel: Optional[LevyKernel], s: float, l: int) -> float:
    """Characteristic exponent ``a(s) l(l+1) + m(s) int (1 - P_l) dnu_0``."""
    if kernel is not None:
        kernel.validate()
    J = _jump_part(kernel, l)
    val = float(_field_values(a, s)) * l * (l + 1)
    if kernel is not None:
        val += float(kernel.m(s)) * J[l]
    return val


def build_symbol_table(a: Callable, kernel: Optional[LevyKernel], grid, L: int,
                       method: str = "adaptive") -> SphericalSymbol:
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if kernel is not None:
        kernel.validate()
    J = _jump_part(kernel, L, method)
    eta = _field_values(a, grid)[:, None] * laplace_eigenvalues(L)[None, :]
    if kernel is not None:
        eta = eta + kernel.m(grid)[:, None] * J[None, :]
    eta[:, 0] = 0.0
    prov = {"a": repr(a), "kernel": None if kernel is None else
            {"base": kernel.base.label, "multiplier": repr(kernel.multiplier)},
            "L": L, "method": method}
    grid.setflags(write=False)
    eta.setflags(write=False)
    return SphericalSymbol(grid, eta, prov)


@dataclass(frozen=True)
class GrowthReport:
    C_fit: float
    ratios: np.ndarray
    slope: float
    window: tuple
    passed: bool


def growth_bound_check(sym: SphericalSymbol, window: Optional[tuple] = None,
                       slope_tol: float = 0.05, positive_roots: int = 1) -> GrowthReport:
    """Empirical check of ``sup_s |eta(s, l)| <= C (1 + l^2 + l^((M+2)/2))``.

    The ratio ``r(l)`` is fitted by least squares in log-log coordinates over
    ``window`` (default: the upper half of the degree range); the bound is
    considered to hold when the fitted slope is at most ``slope_tol``.
    """
    L = sym.band_limit
    l = np.arange(L + 1, dtype=float)
    denom = 1.0 + l ** 2 + l ** ((positive_roots + 2) / 2.0)
    ratios = sym.max_abs() / denom
    C_fit = float(ratios.max()) if L >= 0 else 0.0
    lo, hi = window if window is not None else (max(1, L // 2), L)
    sel = (l >= lo) & (l <= hi) & (ratios > 0)
    if sel.sum() >= 2:
        slope = float(np.polyfit(np.log(l[sel]), np.log(ratios[sel]), 1)[0])
    else:
        slope = -np.inf
    return GrowthReport(C_fit, ratios, slope, (lo, hi), bool(slope <= slope_tol))


def sugiura_zeta(s: float, cutoff: int) -> tuple[float, float]:
    """Partial sum ``sum_{l=1}^{cutoff} l^(-2s)`` and the integral bound on the tail.

    On SO(3)/SO(2) the nonzero spherical weights are ``l = 1, 2, ...`` and the
    rank is 1, so the series converges for ``2s > 1``.  Otherwise a
    :class:`DivergenceWarning` is emitted and the tail is infinite.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    l = np.arange(cutoff, 0, -1, dtype=float)
    partial = float(np.sum(l ** (-2.0 * s)))
    if 2.0 * s <= 1.0:
        warnings.warn(f"zeta series diverges for 2s = {2 * s:g} <= rank 1",
                      DivergenceWarning, stacklevel=2)
        return partial, np.inf
    return partial, float(cutoff ** (1.0 - 2.0 * s) / (2.0 * s - 1.0))


def truncation_tail(f: ZonalFunction, sym: SphericalSymbol, L_trunc: int) -> float:
    """Bound on the sup-norm error of truncating the symbol series after ``L_trunc``."""
    L = min(f.band_limit, sym.band_limit)
    if L_trunc >= L:
        return 0.0
    l = np.arange(L_trunc + 1, L + 1)
    return float(np.sum((2 * l + 1) * sym.max_abs()[l] * np.abs(f.coeffs[l])))
