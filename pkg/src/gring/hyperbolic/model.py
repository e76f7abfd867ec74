"""Hyperboloid model of H^n: points, isometries, distances and geodesics.

Functions accept a single point (shape ``(n+1,)``) or any stack of points
(shape ``(..., n+1)``) and broadcast.  Distances use a formula written in
polar form about the basepoint, which stays accurate when both points are
far from the basepoint; the naive ``arccosh(-<p, q>)`` loses everything
below ``1e-8`` there.
"""
from __future__ import annotations

import numpy as np

from ..errors import PreconditionError

NORM_TOL = 1e-9


def minkowski(p, q):
    p, q = np.asarray(p, float), np.asarray(q, float)
    return -p[..., 0] * q[..., 0] + np.einsum("...i,...i->...", p[..., 1:], q[..., 1:])


def origin(n: int) -> np.ndarray:
    o = np.zeros(n + 1)
    o[0] = 1.0
    return o


def lift(spatial) -> np.ndarray:
    """The hyperboloid point with the given spatial coordinates."""
    s = np.asarray(spatial, float)
    x0 = np.sqrt(1.0 + np.einsum("...i,...i->...", s, s))
    return np.concatenate([x0[..., None], s], axis=-1)


def reproject(p) -> np.ndarray:
    """Restore ``<p, p> = -1`` and ``p_0 > 0`` by recomputing p_0 from the spatial part."""
    return lift(np.asarray(p, float)[..., 1:])


def from_polar(r, u) -> np.ndarray:
    """Point at distance r from the basepoint in the unit direction u."""
    r = np.asarray(r, float)
    u = np.asarray(u, float)
    return np.concatenate([np.cosh(r)[..., None], np.sinh(r)[..., None] * u], axis=-1)


def norm_residual(p) -> np.ndarray:
    """Relative hyperboloid residual ``|<p,p> + 1| / p_0^2``."""
    p = np.asarray(p, float)
    return np.abs(minkowski(p, p) + 1.0) / np.maximum(1.0, p[..., 0] ** 2)


def _polar(p):
    s = np.asarray(p, float)[..., 1:]
    rho = np.sqrt(np.einsum("...i,...i->...", s, s))
    safe = np.where(rho > 0, rho, 1.0)
    return rho, s / safe[..., None]


def hyp_distance(p, q) -> np.ndarray | float:
    """Geodesic distance.

    Uses ``sinh^2(d/2) = sinh^2((r1-r2)/2) + sinh(r1) sinh(r2) |u1-u2|^2 / 4``
    with r_i the distance to the basepoint and u_i the direction.
    """
    s1, u1 = _polar(p)
    s2, u2 = _polar(q)
    r1, r2 = np.arcsinh(s1), np.arcsinh(s2)
    du = u1 - u2
    chord2 = np.einsum("...i,...i->...", du, du)
    val = np.sinh(0.5 * (r1 - r2)) ** 2 + 0.25 * s1 * s2 * chord2
    d = 2.0 * np.arcsinh(np.sqrt(val))
    return float(d) if np.ndim(d) == 0 else d


def radius(p):
    """Distance to the basepoint."""
    s, _ = _polar(p)
    r = np.arcsinh(s)
    return float(r) if np.ndim(r) == 0 else r


def _ratio(num_t, d):
    """sinh(num_t) / sinh(d) for d > 0, stable for large arguments."""
    return np.exp(num_t - d) * np.expm1(-2.0 * num_t) / np.expm1(-2.0 * d)


def geodesic_point(p, q, t, extend: bool = False):
    """The point reached after travelling for time t from p towards q.

    With ``extend=True``, t may exceed d(p, q) and the geodesic ray is followed.
    """
    p, q = np.asarray(p, float), np.asarray(q, float)
    t = np.asarray(t, float)
    d = np.asarray(hyp_distance(p, q), float)
    if np.any(t < -1e-12) or (not extend and np.any(t > d + 1e-9 * (1 + d))):
        raise PreconditionError("geodesic parameter out of range")
    tiny = d < 1e-12
    dd = np.where(tiny, 1.0, d)
    a = np.where(tiny, 1.0, _ratio(dd - t, dd))
    b = np.where(tiny, 0.0, _ratio(t, dd))
    x = a[..., None] * p + b[..., None] * q
    return reproject(x)


def hyp_midpoint(p, q):
    return geodesic_point(p, q, 0.5 * np.asarray(hyp_distance(p, q)))


# -- isometries ---------------------------------------------------------------

J_CACHE: dict[int, np.ndarray] = {}


def minkowski_form(n: int) -> np.ndarray:
    if n not in J_CACHE:
        J = np.eye(n + 1)
        J[0, 0] = -1.0
        J_CACHE[n] = J
    return J_CACHE[n]


def rotation(Q) -> np.ndarray:
    """Isometry fixing the basepoint, acting by the orthogonal matrix Q on the spatial part."""
    Q = np.asarray(Q, float)
    n = Q.shape[-1]
    M = np.zeros(Q.shape[:-2] + (n + 1, n + 1))
    M[..., 0, 0] = 1.0
    M[..., 1:, 1:] = Q
    return M


def boost(s, u) -> np.ndarray:
    """Translation by distance s along the geodesic through the basepoint in direction u."""
    s = np.asarray(s, float)
    u = np.asarray(u, float)
    n = u.shape[-1]
    ch, sh = np.cosh(s)[..., None, None], np.sinh(s)[..., None, None]
    uu = u[..., :, None] * u[..., None, :]
    M = np.zeros(u.shape[:-1] + (n + 1, n + 1))
    M[..., :1, :1] = ch
    M[..., :1, 1:] = sh * u[..., None, :]
    M[..., 1:, :1] = sh * u[..., :, None]
    M[..., 1:, 1:] = np.eye(n) + (ch - 1.0) * uu
    return M


def apply(M, p) -> np.ndarray:
    return reproject(np.einsum("...ij,...j->...i", M, np.asarray(p, float)))


def inverse(M) -> np.ndarray:
    """Inverse of a Lorentz matrix: J M^T J."""
    M = np.asarray(M, float)
    J = minkowski_form(M.shape[-1] - 1)
    return J @ np.swapaxes(M, -1, -2) @ J


def isometry_defect(M) -> float:
    """Relative size of ``M^T J M - J``."""
    M = np.asarray(M, float)
    J = minkowski_form(M.shape[-1] - 1)
    err = np.swapaxes(M, -1, -2) @ J @ M - J
    scale = np.max(np.abs(M), axis=(-2, -1)) ** 2
    return float(np.max(np.abs(err).max(axis=(-2, -1)) / np.maximum(scale, 1.0)))


class HypPoint:
    """A point of H^n on the upper sheet of the hyperboloid."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        c = np.asarray(coords, float)
        if c.ndim != 1 or c.shape[0] < 2:
            raise PreconditionError("a point needs n+1 >= 2 coordinates")
        if c[0] <= 0:
            raise PreconditionError("point is not on the upper sheet")
        if norm_residual(c) > NORM_TOL:
            c = reproject(c)
        self.coords = c

    @classmethod
    def polar(cls, r: float, u) -> "HypPoint":
        u = np.asarray(u, float)
        return cls(from_polar(r, u / np.linalg.norm(u)))

    @property
    def dim(self) -> int:
        return self.coords.shape[0] - 1

    def __array__(self, dtype=None, copy=None):
        return self.coords if dtype is None else self.coords.astype(dtype)

    def __repr__(self) -> str:
        return f"HypPoint({np.array2string(self.coords, precision=6)})"


class HypIsometry:
    """A Lorentz matrix preserving the upper sheet."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        M = np.asarray(matrix, float)
        if isometry_defect(M) > NORM_TOL or M[0, 0] < 1 - 1e-12:
            raise PreconditionError("matrix does not preserve the hyperboloid")
        self.matrix = M

    def __call__(self, p) -> HypPoint:
        return HypPoint(apply(self.matrix, np.asarray(p)))

    def inverse(self) -> "HypIsometry":
        return HypIsometry(inverse(self.matrix))

    def __matmul__(self, other: "HypIsometry") -> "HypIsometry":
        return HypIsometry(self.matrix @ other.matrix)
