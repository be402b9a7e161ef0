"""Dyadic-parabolic pseudo-distance on phase-space points and frame indices.

    d(p, q)     = |dtheta mod pi|^2 + |dx|^2 + |<e_p, dx>|
    omega(p, q) = 2^|j - j'| * (1 + min(2^j, 2^j') d(p, q))

Positions live on the unit torus (shortest displacement per component);
angle differences are taken modulo pi; the effective scale of a point is
log2 of its frequency magnitude in grid units.  Undirected (isotropic)
points drop the angular and along-ridge terms.  All functions broadcast
over stacked points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["PhasePoint", "d", "omega"]


@dataclass(frozen=True)
class PhasePoint:
    """Point (x, xi) of the torus phase space, xi in grid-frequency units.

    Arrays broadcast: x and xi have shape (..., 2), ``directional`` is a
    boolean (or boolean array) marking whether orientation terms apply.
    """

    x: np.ndarray
    xi: np.ndarray
    directional: np.ndarray | bool = True

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        xi = np.asarray(self.xi, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "xi", xi)
        if np.any(np.hypot(xi[..., 0], xi[..., 1]) == 0.0):
            raise ValueError("phase point requires a nonzero frequency")

    @property
    def theta(self):
        return np.arctan2(self.xi[..., 1], self.xi[..., 0])

    @property
    def e(self):
        mag = np.hypot(self.xi[..., 0], self.xi[..., 1])
        return self.xi / mag[..., None]

    @property
    def scale_log2(self):
        return np.log2(np.hypot(self.xi[..., 0], self.xi[..., 1]))


def _torus_delta(a, b):
    return np.mod(a - b + 0.5, 1.0) - 0.5


def _angle_delta_mod_pi(a, b):
    return np.mod(a - b + 0.5 * np.pi, np.pi) - 0.5 * np.pi


def _as_point(obj, table) -> PhasePoint:
    if isinstance(obj, PhasePoint):
        return obj
    if table is None:
        raise TypeError("pass a FrameTable to measure distances between frame indices")
    return table.phase_point(obj)


def d(p, q, table=None):
    """Flat pseudo-distance between phase points (no scale weighting).

    Arguments may be PhasePoints or CurveletIndex values; the latter need
    the owning FrameTable to resolve their phase-space centers.
    """
    p = _as_point(p, table)
    q = _as_point(q, table)
    dx = _torus_delta(p.x, q.x)
    dx2 = np.sum(dx * dx, axis=-1)
    p_dir = np.asarray(p.directional, dtype=bool)
    q_dir = np.asarray(q.directional, dtype=bool)
    both = p_dir & q_dir
    ang = np.where(both, np.abs(_angle_delta_mod_pi(p.theta, q.theta)), 0.0)
    # The along-ridge term follows the first directional argument.
    ridge_p = np.abs(np.sum(p.e * dx, axis=-1))
    ridge_q = np.abs(np.sum(q.e * dx, axis=-1))
    ridge = np.where(p_dir, ridge_p, np.where(q_dir, ridge_q, 0.0))
    return ang * ang + dx2 + ridge


def omega(p, q, table=None):
    """Scale-weighted pseudo-distance; >= 1, equal to 1 at coincident points."""
    p = _as_point(p, table)
    q = _as_point(q, table)
    jp, jq = p.scale_log2, q.scale_log2
    return 2.0 ** np.abs(jp - jq) * (1.0 + 2.0 ** np.minimum(jp, jq) * d(p, q))


def stack_points(points) -> PhasePoint:
    """Combine scalar PhasePoints into one broadcasting PhasePoint."""
    return PhasePoint(
        x=np.stack([np.asarray(p.x, dtype=float) for p in points]),
        xi=np.stack([np.asarray(p.xi, dtype=float) for p in points]),
        directional=np.array([bool(np.asarray(p.directional)) for p in points]),
    )
