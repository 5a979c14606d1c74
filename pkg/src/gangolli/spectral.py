"""Legendre calculus for zonal functions on the sphere.

Zonal functions are expanded as ``F(theta) = sum_l (2l+1) fhat(l) P_l(cos theta)``
with ``fhat(l) = 1/2 * int_{-1}^{1} F(arccos x) P_l(x) dx``, i.e. the spherical
transform against normalized Haar measure.  With this convention ``fhat(0)``
is the mean of ``F`` and the constant function 1 has ``fhat = (1, 0, 0, ...)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, InsufficientGrid, TooCloseToPole

DEFAULT_BAND_LIMIT = 64
DEFAULT_AZIMUTH_NODES = 256
POLE_MARGIN = 1e-3


# ---------------------------------------------------------------------------
# Legendre polynomials

def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise DomainError("Legendre argument outside [-1, 1]")
    return np.clip(x, -1.0, 1.0)


def legendre_eval(l: int, x):
    """``P_l(x)`` by the three-term recurrence.

    Accepts scalar or array ``x``; raises :class:`DomainError` if ``|x| > 1``
    beyond rounding.
    """
    if l < 0:
        raise ValueError("degree must be nonnegative")
    x = _check_domain(x)
    p_prev = np.ones_like(x)
    if l == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for n in range(1, l):
        p_prev, p = p, ((2 * n + 1) * x * p - n * p_prev) / (n + 1)
    return p if p.ndim else float(p)


def legendre_table(L: int, x) -> np.ndarray:
    """All ``P_0 .. P_L`` at ``x``; result has shape ``x.shape + (L + 1,)``."""
    x = _check_domain(x)
    out = np.empty(x.shape + (L + 1,))
    out[..., 0] = 1.0
    if L >= 1:
        out[..., 1] = x
    for n in range(1, L):
        out[..., n + 1] = ((2 * n + 1) * x * out[..., n] - n * out[..., n - 1]) / (n + 1)
    return out


def legendre_derivative_tables(L: int, x):
    """``P_l``, ``P_l'`` and ``P_l''`` for ``l = 0..L`` at ``x``.

    Uses ``P'_{n+1} = P'_{n-1} + (2n+1) P_n`` and the same recurrence one
    derivative higher, which stay finite at the endpoints.
    """
    P = legendre_table(L, x)
    dP = np.zeros_like(P)
    d2P = np.zeros_like(P)
    if L >= 1:
        dP[..., 1] = 1.0
    for n in range(1, L):
        dP[..., n + 1] = dP[..., n - 1] + (2 * n + 1) * P[..., n]
        d2P[..., n + 1] = d2P[..., n - 1] + (2 * n + 1) * dP[..., n]
    return P, dP, d2P


def legendre_series(weights, x):
    """``sum_l weights[l] P_l(x)`` without storing the full table."""
    weights = np.asarray(weights, dtype=float)
    x = _check_domain(x)
    acc = np.full(x.shape, weights[0])
    if len(weights) == 1:
        return acc
    p_prev = np.ones_like(x)
    p = x.copy()
    acc += weights[1] * p
    for n in range(1, len(weights) - 1):
        p_prev, p = p, ((2 * n + 1) * x * p - n * p_prev) / (n + 1)
        acc += weights[n + 1] * p
    return acc


# ---------------------------------------------------------------------------
# Quadrature

@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> QuadratureRule:
    """Gauss-Legendre rule on ``[-1, 1]`` with ``n`` nodes.

    Nodes are the roots of ``P_n`` found by Newton's method started from
    the Chebyshev-like guesses ``cos(pi (j - 1/4) / (n + 1/2))``.  Nodes are
    returned in increasing order and are exactly antisymmetric.
    """
    if n < 1:
        raise ValueError("quadrature order must be at least 1")
    m = (n + 1) // 2
    j = np.arange(1, m + 1)
    x = np.cos(np.pi * (j - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    p, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    if n % 2:
        # middle node is exactly 0
        x[-1] = 0.0
        _, dp0 = _legendre_and_derivative(n, np.array([0.0]))
        w[-1] = 2.0 / dp0[0] ** 2
        nodes = np.concatenate([-x, x[-2::-1]])
        weights = np.concatenate([w, w[-2::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights)


def _legendre_and_derivative(n, x):
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    if n == 0:
        return np.ones_like(x), np.zeros_like(x)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def composite_rule(breakpoints, n: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an ``n``-point Gauss-Legendre rule on each panel."""
    base = gauss_legendre(n)
    b = np.asarray(breakpoints, dtype=float)
    lo, hi = b[:-1, None], b[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * base.nodes[None, :]).ravel()
    weights = (half * base.weights[None, :]).ravel()
    return nodes, weights


def graded_breakpoints(start: float, stop: float = np.pi, knee: float = 0.1,
                       ratio: float = 2.0, width: float = 0.2) -> np.ndarray:
    """Panels refined geometrically towards ``start`` up to ``knee``, uniform after.

    Suited to integrands with an algebraic singularity just left of ``start``.
    """
    pts = [start]
    knee = max(knee, start)
    while pts[-1] * ratio < knee:
        pts.append(pts[-1] * ratio)
    if knee > pts[-1]:
        pts.append(knee)
    n_uniform = max(1, int(np.ceil((stop - pts[-1]) / width)))
    pts.extend(np.linspace(pts[-1], stop, n_uniform + 1)[1:])
    return np.array(pts)


# ---------------------------------------------------------------------------
# Zonal functions

class ZonalFunction:
    """A zonal function held by Legendre coefficients and/or grid samples.

    Either view may be supplied; the other is materialized on first access and
    cached, after which the object is effectively immutable.  The sample view
    lives on the Gauss-Legendre colatitudes ``arccos(x_j)`` of ``rule``.
    """

    def __init__(self, coeffs=None, *, samples=None, rule: QuadratureRule | None = None,
                 band_limit: int | None = None):
        if coeffs is None and samples is None:
            raise ValueError("need coefficients or samples")
        self._coeffs = None
        self._samples = None
        if coeffs is not None:
            c = np.array(coeffs, dtype=float).ravel()
            if c.size == 0:
                raise ValueError("empty coefficient array")
            c.setflags(write=False)
            self._coeffs = c
            self.band_limit = c.size - 1 if band_limit is None else int(band_limit)
            if self.band_limit != c.size - 1:
                raise ValueError("band_limit disagrees with coefficient length")
        else:
            if rule is None:
                raise ValueError("samples need their quadrature rule")
            s = np.array(samples, dtype=float).ravel()
            if s.size != rule.order:
                raise ValueError("sample count does not match rule order")
            s.setflags(write=False)
            self._samples = s
            self.band_limit = rule.order - 1 if band_limit is None else int(band_limit)
        self._rule = rule if rule is not None else gauss_legendre(2 * self.band_limit + 2)

    # construction helpers
    @classmethod
    def constant(cls, value: float = 1.0, band_limit: int = 0) -> "ZonalFunction":
        c = np.zeros(band_limit + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def spherical(cls, l: int, band_limit: int | None = None) -> "ZonalFunction":
        """The spherical function ``P_l(cos theta)``."""
        L = l if band_limit is None else band_limit
        c = np.zeros(L + 1)
        c[l] = 1.0 / (2 * l + 1)
        return cls(c)

    @classmethod
    def from_callable(cls, func, band_limit: int, n: int | None = None) -> "ZonalFunction":
        """Sample ``func(theta)`` on a Gauss-Legendre grid and truncate to ``band_limit``."""
        rule = gauss_legendre(n if n is not None else 2 * band_limit + 2)
        values = np.asarray(func(np.arccos(rule.nodes)), dtype=float)
        return cls(samples=np.broadcast_to(values, rule.nodes.shape), rule=rule,
                   band_limit=band_limit)

    # views
    @property
    def rule(self) -> QuadratureRule:
        return self._rule

    @property
    def coeffs(self) -> np.ndarray:
        if self._coeffs is None:
            c = spherical_transform(self, self.band_limit)
            c.setflags(write=False)
            self._coeffs = c
        return self._coeffs

    @property
    def samples(self) -> np.ndarray:
        if self._samples is None:
            s = self.eval_cos(self._rule.nodes)
            s.setflags(write=False)
            self._samples = s
        return self._samples

    @property
    def grid_colatitudes(self) -> np.ndarray:
        return np.arccos(self._rule.nodes)

    @property
    def series_weights(self) -> np.ndarray:
        """``(2l+1) fhat(l)``: coefficients of the plain Legendre series."""
        return (2 * np.arange(self.band_limit + 1) + 1) * self.coeffs

    # evaluation
    def eval_cos(self, x):
        """Evaluate as a polynomial in ``x = cos(theta)``."""
        out = legendre_series(self.series_weights, x)
        return out if np.ndim(out) else float(out)

    def __call__(self, theta):
        return self.eval_cos(np.cos(theta))

    def derivatives(self, theta):
        """``F``, ``dF/dtheta`` and ``d2F/dtheta2`` at ``theta``."""
        theta = np.asarray(theta, dtype=float)
        x, st = np.cos(theta), np.sin(theta)
        P, dP, d2P = legendre_derivative_tables(self.band_limit, x)
        w = self.series_weights
        G, dG, d2G = P @ w, dP @ w, d2P @ w
        return G, -st * dG, st * st * d2G - x * dG

    def sup_norm(self, n: int = 4097) -> float:
        return float(np.max(np.abs(self(np.linspace(0.0, np.pi, n)))))

    def with_coeffs(self, coeffs) -> "ZonalFunction":
        return ZonalFunction(coeffs)

    def __add__(self, other):
        if not isinstance(other, ZonalFunction):
            return NotImplemented
        L = max(self.band_limit, other.band_limit)
        c = np.zeros(L + 1)
        c[: self.band_limit + 1] += self.coeffs
        c[: other.band_limit + 1] += other.coeffs
        return ZonalFunction(c)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return ZonalFunction(self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        if not isinstance(other, ZonalFunction):
            return NotImplemented
        return self + (-other)

    def __repr__(self):
        return f"ZonalFunction(band_limit={self.band_limit})"


def spherical_transform(F: ZonalFunction, L: int) -> np.ndarray:
    """Coefficients ``fhat(0..L)`` from the sample view of ``F``.

    Raises
    ------
    InsufficientGrid
        If the sample grid has fewer than ``L + 1`` nodes.
    """
    rule = F.rule
    if rule.order < L + 1:
        raise InsufficientGrid(f"{rule.order} nodes cannot resolve band limit {L}")
    P = legendre_table(L, rule.nodes)
    return 0.5 * (rule.weights * F.samples) @ P


def synthesis(coeffs, band_limit: int | None = None) -> ZonalFunction:
    """Peter-Weyl synthesis ``F = sum_l (2l+1) coeffs[l] P_l(cos theta)``."""
    c = np.asarray(coeffs, dtype=float)
    if band_limit is not None and band_limit + 1 > c.size:
        c = np.concatenate([c, np.zeros(band_limit + 1 - c.size)])
    return ZonalFunction(c)


def laplace_eigenvalues(L: int) -> np.ndarray:
    """``c_l = l (l + 1)``, so that ``Delta P_l = -c_l P_l``."""
    l = np.arange(L + 1)
    return (l * (l + 1)).astype(float)


def laplacian_spectral(F: ZonalFunction) -> ZonalFunction:
    return ZonalFunction(-laplace_eigenvalues(F.band_limit) * F.coeffs)


def laplacian_direct(F: ZonalFunction, s, delta: float = POLE_MARGIN):
    """Laplace-Beltrami operator ``F'' + cot(s) F'`` from analytic derivatives.

    Raises
    ------
    TooCloseToPole
        If any ``s`` lies within ``delta`` of a pole.
    """
    s = np.asarray(s, dtype=float)
    if np.any((s <= delta) | (s >= np.pi - delta)):
        raise TooCloseToPole(f"colatitude within {delta} of a pole")
    _, d1, d2 = F.derivatives(s)
    out = d2 + d1 * np.cos(s) / np.sin(s)
    return out if out.ndim else float(out)


def spherical_mean(F: ZonalFunction, theta, s, n_psi: int = DEFAULT_AZIMUTH_NODES):
    """Average of ``F`` over the circle at angular distance ``theta`` from colatitude ``s``.

    ``theta`` and ``s`` broadcast against each other.  The azimuthal average
    uses the periodic trapezoid rule with ``n_psi`` nodes, which is exact for
    band limits below ``n_psi``.
    """
    theta = np.asarray(theta, dtype=float)
    s = np.asarray(s, dtype=float)
    psi = 2.0 * np.pi * np.arange(n_psi) / n_psi
    ct, st = np.cos(theta)[..., None], np.sin(theta)[..., None]
    cs, ss = np.cos(s)[..., None], np.sin(s)[..., None]
    x = np.clip(cs * ct + ss * st * np.cos(psi), -1.0, 1.0)
    out = F.eval_cos(x).mean(axis=-1)
    return out if np.ndim(out) else float(out)


def random_band_limited(rng: np.random.Generator, band_limit: int,
                        decay: float = 1.0) -> ZonalFunction:
    """Random zonal function with ``fhat(l) ~ N(0,1) / ((2l+1) (1+l)^decay)``."""
    l = np.arange(band_limit + 1)
    c = rng.standard_normal(band_limit + 1) / ((2 * l + 1) * (1.0 + l) ** decay)
    return ZonalFunction(c)
