"""Exact group operations on SO(3) and the Cartan split so(3) = k + p.

Conventions
-----------
- Rotations are unit quaternions ``(w, x, y, z)``; ``q`` and ``-q`` are the
  same rotation and every observable below is sign invariant.
- The base point ``o`` is the north pole ``(0, 0, 1)``; ``K`` is the group of
  rotations about the polar axis, so ``S^2 = SO(3)/K``.
- Lie algebra vectors are coordinate triples ``v = (v1, v2, v3)`` in the basis
  ``X1, X2`` (spanning p) and ``X3`` (spanning k).  As angular velocities
  ``X1 = e_y``, ``X2 = -e_x``, ``X3 = e_z``, so ``exp(t X1) o`` moves along
  azimuth 0 and ``exp(t X2) o`` along azimuth pi/2.  The basis is orthonormal
  for the Euclidean inner product of angular velocities, which is a multiple
  of the Killing form and hence Ad-invariant.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AngleTooLarge, NotInSubgroup

NORTH_POLE = np.array([0.0, 0.0, 1.0])

X1 = np.array([1.0, 0.0, 0.0])
X2 = np.array([0.0, 1.0, 0.0])
X3 = np.array([0.0, 0.0, 1.0])

#: default distance from the cut locus below which ``log_map`` refuses
LOG_DELTA = 1e-6

#: cutoff profile of the canonical coordinates: identically 1 below
#: ``CUTOFF_INNER`` and identically 0 above ``CUTOFF_OUTER``
CUTOFF_INNER = np.pi / 2
CUTOFF_OUTER = np.pi - 0.1


def _omega_from_lie(v):
    v = np.asarray(v, dtype=float)
    return np.array([-v[1], v[0], v[2]])


def _lie_from_omega(w):
    w = np.asarray(w, dtype=float)
    return np.array([w[1], -w[0], w[2]])


def _qmul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A rotation of R^3 held as a unit quaternion ``(w, x, y, z)``."""

    q: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))

    def __post_init__(self):
        q = np.array(self.q, dtype=float).reshape(4)
        n = np.linalg.norm(q)
        if n == 0.0:
            raise ValueError("zero quaternion")
        q = q / n
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(np.array([1.0, 0.0, 0.0, 0.0]))

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> "GroupElement":
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        return cls(np.concatenate([[np.cos(angle / 2)], np.sin(angle / 2) * axis]))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def inverse(self) -> "GroupElement":
        w, x, y, z = self.q
        return GroupElement(np.array([w, -x, -y, -z]))

    def matrix(self) -> np.ndarray:
        """3x3 rotation matrix."""
        w, x, y, z = self.q
        return np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ])

    def act(self, p) -> np.ndarray:
        """Rotate vector(s) ``p`` (shape ``(3,)`` or ``(n, 3)``)."""
        return np.asarray(p, dtype=float) @ self.matrix().T

    def angle(self) -> float:
        """Rotation angle in ``[0, pi]``."""
        w = abs(self.q[0])
        return 2.0 * np.arctan2(np.linalg.norm(self.q[1:]), w)

    def coset(self) -> "SpherePoint":
        """Projection ``g -> g K``, i.e. the image of the base point."""
        return SpherePoint(self.act(NORTH_POLE))

    def colatitude(self) -> float:
        return self.coset().colatitude

    def isclose(self, other: "GroupElement", atol: float = 1e-12) -> bool:
        d = min(np.linalg.norm(self.q - other.q), np.linalg.norm(self.q + other.q))
        return bool(d <= atol)

    def __repr__(self):
        return f"GroupElement(q={np.array2string(self.q, precision=6)})"


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """Unit vector on S^2 with derived colatitude and azimuth."""

    v: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=float).reshape(3)
        v = v / np.linalg.norm(v)
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_angles(cls, colatitude: float, azimuth: float = 0.0) -> "SpherePoint":
        st = np.sin(colatitude)
        return cls(np.array([st * np.cos(azimuth), st * np.sin(azimuth), np.cos(colatitude)]))

    @property
    def colatitude(self) -> float:
        return float(np.arctan2(np.hypot(self.v[0], self.v[1]), self.v[2]))

    @property
    def azimuth(self) -> float:
        return float(np.mod(np.arctan2(self.v[1], self.v[0]), 2 * np.pi))


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Group product ``g h`` (apply ``h`` first), renormalized."""
    return GroupElement(_qmul(g.q, h.q))


def exp_map(v) -> GroupElement:
    """Exponential of a Lie algebra vector given in the ``X1, X2, X3`` basis."""
    w = _omega_from_lie(v)
    angle = np.linalg.norm(w)
    if angle == 0.0:
        return GroupElement.identity()
    return GroupElement(np.concatenate([[np.cos(angle / 2)], np.sin(angle / 2) * w / angle]))


def log_map(g: GroupElement, delta: float = LOG_DELTA) -> np.ndarray:
    """Inverse of :func:`exp_map` on rotations of angle below ``pi - delta``.

    Raises
    ------
    AngleTooLarge
        If the rotation angle is within ``delta`` of pi, where the logarithm
        is not unique.
    """
    q = g.q if g.q[0] >= 0 else -g.q
    s = np.linalg.norm(q[1:])
    angle = 2.0 * np.arctan2(s, q[0])
    if angle >= np.pi - delta:
        raise AngleTooLarge(f"rotation angle {angle!r} within {delta} of pi")
    if s == 0.0:
        return np.zeros(3)
    return _lie_from_omega(angle * q[1:] / s)


def rot_x(angle: float) -> GroupElement:
    return GroupElement.from_axis_angle([1.0, 0.0, 0.0], angle)


def rot_y(angle: float) -> GroupElement:
    return GroupElement.from_axis_angle([0.0, 1.0, 0.0], angle)


def rot_z(angle: float) -> GroupElement:
    return GroupElement.from_axis_angle([0.0, 0.0, 1.0], angle)


def cutoff(theta):
    """C^2 bump: 1 on ``[0, pi/2]``, 0 on ``[pi - 0.1, pi]``, quintic smoothstep between."""
    theta = np.asarray(theta, dtype=float)
    u = np.clip((theta - CUTOFF_INNER) / (CUTOFF_OUTER - CUTOFF_INNER), 0.0, 1.0)
    out = 1.0 - u ** 3 * (10.0 - 15.0 * u + 6.0 * u * u)
    return out if out.ndim else float(out)


def canonical_coordinates(g: GroupElement) -> np.ndarray:
    """Globally defined coordinates ``(x1, x2, x3)`` agreeing with ``log_map`` near ``e``.

    ``(x1, x2)`` is ``cutoff(theta) * theta * (cos psi, sin psi)`` where
    ``(theta, psi)`` are colatitude and azimuth of ``g o``; it depends only on
    the coset ``gK`` and satisfies ``x(k g) = ad_matrix(k) x(g)``.  ``x3`` is
    the k-component of ``log_map(g)`` damped by the same cutoff in the
    rotation angle of ``g``.
    """
    p = g.coset()
    theta = p.colatitude
    psi = p.azimuth
    r = cutoff(theta) * theta
    x1, x2 = r * np.cos(psi), r * np.sin(psi)
    angle = g.angle()
    chi = cutoff(angle)
    x3 = chi * log_map(g)[2] if chi > 0.0 else 0.0
    return np.array([x1, x2, x3])


def ad_matrix(k: GroupElement, atol: float = 1e-9) -> np.ndarray:
    """Matrix of ``Ad(k)`` restricted to p, in the basis ``(X1, X2)``.

    Column ``i`` holds the coordinates of ``Ad(k) X_i``.  For ``k = rot_z(psi)``
    this is the planar rotation by ``+psi``.

    Raises
    ------
    NotInSubgroup
        If ``k`` moves the base point by more than ``atol``.
    """
    moved = np.linalg.norm(k.act(NORTH_POLE) - NORTH_POLE)
    if moved > atol:
        raise NotInSubgroup(f"element moves the base point by {moved:.3e}")
    R = k.matrix()
    cols = [_lie_from_omega(R @ _omega_from_lie(X))[:2] for X in (X1, X2)]
    return np.column_stack(cols)


def cartan_project(v) -> tuple[np.ndarray, float]:
    """Split ``v`` into its p-part (2 coordinates) and k-part (1 coordinate)."""
    v = np.asarray(v, dtype=float)
    return v[:2].copy(), float(v[2])


def lie_inner(u, v) -> float:
    return float(np.dot(np.asarray(u, dtype=float), np.asarray(v, dtype=float)))


def adjoint(g: GroupElement, v) -> np.ndarray:
    """``Ad(g) v`` for a Lie vector in the ``X1, X2, X3`` basis."""
    return _lie_from_omega(g.matrix() @ _omega_from_lie(v))


def random_rotation(rng: np.random.Generator) -> GroupElement:
    """Haar-distributed rotation."""
    return GroupElement(rng.standard_normal(4))


def random_k(rng: np.random.Generator) -> GroupElement:
    return rot_z(rng.uniform(0.0, 2 * np.pi))


def meridian_element(colatitude: float) -> GroupElement:
    """``exp(s X1)``: the standard representative of colatitude ``s``."""
    return rot_y(colatitude)


def colatitude_of_points(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    return np.arctan2(np.hypot(points[..., 0], points[..., 1]), points[..., 2])
