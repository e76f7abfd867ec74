"""Smallest enclosing balls in H^n.

The minimal ball of a finite set is the circumscribed ball of at most n+1
of its points, centred in their span.  For the small sets used here every
such support is enumerated (vectorised over a batch of sets) and the
candidate centre with the least covering radius wins.  Larger sets go
through farthest-point geodesic descent, which then hands its near-farthest
points to the same enumeration.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from ..errors import ConvergenceError, PreconditionError
from .model import geodesic_point, hyp_distance, hyp_midpoint, lift, minkowski, minkowski_form, reproject

EXACT_LIMIT = 12
CHUNK = 512


def _circumcenters(P):
    """Centres of the balls circumscribed about each stack of points, within their span.

    ``P`` has shape ``(B, k, n+1)``; returns ``(centres, ok)``.
    """
    B, k, m = P.shape
    if k == 1:
        return P[:, 0], np.ones(B, bool)
    if k == 2:
        return hyp_midpoint(P[:, 0], P[:, 1]), np.ones(B, bool)
    J = minkowski_form(m - 1)
    Q, _ = np.linalg.qr(np.swapaxes(P, 1, 2))          # (B, m, k) basis of the span
    rows = (P[:, :1] - P[:, 1:]) @ J                     # bisector normals
    norms = np.linalg.norm(rows, axis=2, keepdims=True)
    distinct = (norms[:, :, 0] > 0).all(axis=1)          # repeated points give no bisector
    rows = rows / np.where(norms > 0, norms, 1.0)
    A = rows @ Q                                         # (B, k-1, k)
    _, _, vh = np.linalg.svd(A)
    c = np.einsum("bmk,bk->bm", Q, vh[:, -1, :])
    c = np.where(c[:, :1] < 0, -c, c)
    nrm = -minkowski(c, c)
    ok = (nrm > 0) & distinct
    c = c / np.sqrt(np.where(ok, nrm, 1.0))[:, None]
    return reproject(c), ok


def _subsets(k: int, n: int):
    for size in range(1, min(k, n + 1) + 1):
        yield size, np.array(list(combinations(range(k), size)), dtype=int)


def meb_exact_batch(P) -> tuple[np.ndarray, np.ndarray]:
    """Exact minimal balls for a batch of equally sized sets ``P`` of shape ``(B, k, n+1)``."""
    P = np.asarray(P, float)
    if P.ndim == 2:
        c, r = meb_exact_batch(P[None])
        return c[0], r[0]
    B, k, m = P.shape
    n = m - 1
    centers = np.empty((B, m))
    radii = np.empty(B)
    for lo in range(0, B, CHUNK):
        chunk = P[lo:lo + CHUNK]
        b = chunk.shape[0]
        best_r = np.full(b, np.inf)
        best_c = np.empty((b, m))
        for size, idx in _subsets(k, n):
            S = idx.shape[0]
            sub = chunk[:, idx].reshape(b * S, size, m)
            c, ok = _circumcenters(sub)
            c = c.reshape(b, S, m)
            r = hyp_distance(c[:, :, None, :], chunk[:, None, :, :]).max(axis=2)
            r = np.where(ok.reshape(b, S), r, np.inf)
            j = np.argmin(r, axis=1)
            rj = r[np.arange(b), j]
            better = rj < best_r
            best_r = np.where(better, rj, best_r)
            best_c[better] = c[np.arange(b), j][better]
        centers[lo:lo + b] = best_c
        radii[lo:lo + b] = best_r
    return centers, radii


def meb_iterative(P, tol: float = 1e-9, max_iter: int = 500):
    """Farthest-point geodesic descent, then an exact active-set refinement.

    The descent picks a working set of near-farthest points; the exact ball of
    the working set is a lower bound for the whole set, so once it covers
    every point it is the answer.  Otherwise the farthest uncovered point
    joins the working set.
    """
    P = np.asarray(P, float)
    c = P[0]
    for k in range(1, max_iter + 1):
        d = hyp_distance(c, P)
        j = int(np.argmax(d))
        step = d[j] / (k + 1)
        if step < tol:
            break
        c = geodesic_point(c, P[j], step)
    d = hyp_distance(c, P)
    active = list(np.argsort(-d)[: min(len(P), P.shape[1])])
    while True:
        ca, ra = meb_exact_batch(P[active])
        d = hyp_distance(ca, P)
        j = int(np.argmax(d))
        if d[j] <= ra + tol * (1.0 + ra) or j in active:
            return ca, float(d.max())
        if len(active) >= 4 * EXACT_LIMIT:
            raise ConvergenceError("active set grew beyond the exact limit")
        # drop points strictly inside the current ball before adding the new one
        keep = [i for i in active if d[i] >= ra - 1e-6 * (1.0 + ra)]
        active = keep + [j]


def verify_meb(P, center, radius: float, tol: float, restarts: int = 100, seed: int = 0) -> None:
    """Check containment and that no nearby centre gives a smaller covering radius."""
    P = np.asarray(P, float)
    slack = tol * (1.0 + radius)
    if hyp_distance(center, P).max() > radius + slack:
        raise ConvergenceError("a point lies outside the reported ball")
    rng = np.random.default_rng(seed)
    n = P.shape[1] - 1
    for i in range(restarts):
        w = rng.normal(size=n)
        w /= np.linalg.norm(w)
        eps = 10.0 ** rng.uniform(-6, -1)
        # a point at distance eps from the centre in a random tangent direction
        target = lift(center[1:] + eps * w * (1 + abs(center[0])))
        probe = geodesic_point(center, target, min(eps, hyp_distance(center, target)))
        if hyp_distance(probe, P).max() < radius - slack:
            raise ConvergenceError(f"perturbation {i} found a smaller enclosing ball")


def min_enclosing_ball(points, tol: float = 1e-9, verify: bool = True):
    """``(center, radius)`` of the smallest ball containing the points."""
    P = np.asarray([np.asarray(p, float) for p in points], float)
    if P.ndim != 2 or len(P) == 0:
        raise PreconditionError("need a nonempty list of points")
    if len(P) <= EXACT_LIMIT:
        c, r = meb_exact_batch(P)
    else:
        c, r = meb_iterative(P, tol)
    r = float(r)
    if verify:
        verify_meb(P, c, r, max(tol, 1e-9))
    return c, r
