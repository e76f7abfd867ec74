"""Sampled verification of tree-like inequalities in H^n.

Each lemma has a sampler (one configuration from one RNG stream) and a
vectorised evaluator returning named slacks; an inequality holds on a
sample iff every slack is ``>= -tol`` (``> 0`` for strict ones).

Sampling measure: the ball centre is the basepoint, ball radii are uniform
in [1, 30], and points are placed along Gaussian directions.  Sample i of a
sweep uses ``numpy.random.default_rng([seed, lemma_index, dim, i])``, so any
failure is reproducible from (seed, lemma, dim, i).
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConvergenceError, PreconditionError
from .meb import meb_exact_batch
from .model import (
    apply,
    boost,
    from_polar,
    geodesic_point,
    hyp_distance,
    hyp_midpoint,
    inverse,
    origin,
    radius,
    reproject,
    rotation,
)

R_MIN, R_MAX = 1.0, 30.0
GRID_STEPS = 64
MAX_ATTEMPTS = 10_000


# -- outcome types ------------------------------------------------------------

@dataclass
class CheckOutcome:
    lemma: str
    slacks: dict
    constants: dict
    config: dict = field(default_factory=dict)
    strict: bool = False
    vacuous: bool = False

    @property
    def slack(self) -> float:
        return min(self.slacks.values())

    def passed(self, tol: float = 1e-9) -> bool:
        return self.slack > 0 if self.strict else self.slack >= -tol


@dataclass
class SweepResult:
    lemma: str
    dim: int
    samples: int
    seed: int
    delta: float
    mu: float
    tol: float
    failures: list
    min_slack: float
    vacuous: int
    acceptance: float

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma, "dim": self.dim, "samples": self.samples, "seed": self.seed,
            "delta": self.delta, "mu": self.mu, "tol": self.tol,
            "failures": len(self.failures), "failed_samples": self.failures[:20],
            "min_slack": self.min_slack, "vacuous": self.vacuous,
            "acceptance_rate": self.acceptance,
        }


# -- sampling helpers ---------------------------------------------------------

def _direction(rng, n):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def _point(rng, n, r):
    return from_polar(r, _direction(rng, n))


def _ball_points(rng, n, k, R):
    return np.array([_point(rng, n, rng.uniform(0.0, R)) for _ in range(k)])


def _random_isometry(rng, n, max_boost):
    Q, Rm = np.linalg.qr(rng.normal(size=(n, n)))
    Q = Q * np.sign(np.diag(Rm))
    return boost(rng.uniform(0.0, max_boost), _direction(rng, n)) @ rotation(Q)


def _pairwise(X):
    return hyp_distance(X[..., :, None, :], X[..., None, :, :])


def _diameter(X):
    """Diameter and a diametral pair (indices) of each set in a batch ``(N, k, n+1)``."""
    D = _pairwise(X)
    k = X.shape[-2]
    flat = D.reshape(D.shape[:-2] + (k * k,))
    idx = np.argmax(flat, axis=-1)
    return np.take_along_axis(flat, idx[..., None], -1)[..., 0], idx // k, idx % k, D


def _take(X, i):
    return np.take_along_axis(X, i[:, None, None], 1)[:, 0]


def _o(cfg):
    return cfg["o"]


# -- lemmas -------------------------------------------------------------------

def sample_delta(rng, n, delta, mu):
    return {"o": origin(n), "p": _point(rng, n, rng.uniform(R_MIN, R_MAX)),
            "q": _point(rng, n, rng.uniform(R_MIN, R_MAX))}


def eval_delta(c, delta, mu):
    o, p, q = _o(c), c["p"], c["q"]
    m = hyp_midpoint(p, q)
    lhs = np.maximum(hyp_distance(o, p), hyp_distance(o, q))
    rhs = hyp_distance(o, m) + 0.5 * hyp_distance(p, q) - delta
    return {"slack": lhs - rhs}


def sample_annulus(rng, n, delta, mu):
    R = rng.uniform(R_MIN, R_MAX)
    Rp = rng.uniform(R, R_MAX)
    phi = rng.uniform(np.pi / 2, np.pi)
    u = _direction(rng, n)
    v = rng.normal(size=n)
    v -= v.dot(u) * u
    v /= np.linalg.norm(v)
    m = from_polar(R, u)
    # law of cosines at m with an obtuse angle phi between mo and mq
    A, B = np.cosh(R), np.sinh(R) * abs(np.cos(phi))
    K = np.sqrt(1.0 + (np.sinh(R) * np.sin(phi)) ** 2)
    A_minus_B = np.exp(-R) + np.sinh(R) * (1.0 - abs(np.cos(phi)))
    s0 = 0.5 * np.log((A + B) / A_minus_B)
    s = max(0.0, float(np.arccosh(max(1.0, np.cosh(Rp) / K)) - s0))
    e_r = np.concatenate([[np.sinh(R)], np.cosh(R) * u])
    e_p = np.concatenate([[0.0], v])
    w = -np.cos(phi) * e_r + np.sin(phi) * e_p
    q = reproject(np.cosh(s) * m + np.sinh(s) * w)
    return {"o": origin(n), "m": m, "q": q}


def eval_annulus(c, delta, mu):
    o, m, q = _o(c), c["m"], c["q"]
    R, Rp = hyp_distance(o, m), hyp_distance(o, q)
    L = hyp_distance(m, q)
    return {"upper": (Rp - R + delta) - L, "lower": L - (Rp - R)}


def sample_midpoint_in_ball(rng, n, delta, mu):
    R = rng.uniform(R_MIN, R_MAX)
    return {"o": origin(n), "R": np.float64(R),
            "p": _point(rng, n, rng.uniform(0, R)), "q": _point(rng, n, rng.uniform(0, R))}


def eval_midpoint_in_ball(c, delta, mu):
    o, p, q, R = _o(c), c["p"], c["q"], c["R"]
    L = hyp_distance(p, q)
    m = hyp_midpoint(p, q)
    return {"slack": R - 0.5 * L + delta - hyp_distance(o, m)}


SET_K = {"set-containment": 10, "barycenter-midpoint": 8}
DEFAULT_K = 6


def _sample_set(k):
    def sampler(rng, n, delta, mu):
        R = rng.uniform(R_MIN, R_MAX)
        return {"o": origin(n), "X": _ball_points(rng, n, k, R)}
    return sampler


def eval_set_containment(c, delta, mu):
    X = c["X"]
    D, i, j, _ = _diameter(X)
    m = hyp_midpoint(_take(X, i), _take(X, j))
    far = hyp_distance(m[:, None, :], X).max(axis=1)
    return {"slack": 0.5 * D + delta - far}


def eval_barycenter_midpoint(c, delta, mu):
    X = c["X"]
    _, i, j, _ = _diameter(X)
    m = hyp_midpoint(_take(X, i), _take(X, j))
    xhat, _ = meb_exact_batch(X)
    return {"slack": 2 * delta - hyp_distance(xhat, m)}


def eval_barycenter_bounds(c, delta, mu):
    o, X = _o(c), c["X"]
    R = hyp_distance(o[:, None, :], X).max(axis=1)
    D = _diameter(X)[0]
    xhat, _ = meb_exact_batch(X)
    dist = hyp_distance(o, xhat)
    return {"lower": dist - (R - 0.5 * D - delta), "upper": (R - 0.5 * D + 3 * delta) - dist}


def sample_extremal(rng, n, delta, mu):
    # shifted by 5*delta so the inner set is usually nonempty; half the points
    # sit in a shell near the boundary
    R = rng.uniform(R_MIN, R_MAX) + 5 * delta
    shell = [_point(rng, n, rng.uniform(max(0.0, R - 2 * delta), R)) for _ in range(DEFAULT_K // 2)]
    rest = _ball_points(rng, n, DEFAULT_K - len(shell), R)
    return {"o": origin(n), "X": np.vstack([shell, rest])}


def eval_extremal(c, delta, mu):
    o, X = _o(c), c["X"]
    r = hyp_distance(o[:, None, :], X)
    R = r.max(axis=1)
    inner = r <= (R - 5 * delta)[:, None]
    D, _, _, P = _diameter(X)
    both = inner[:, :, None] & inner[:, None, :]
    Din = np.where(both, P, 0.0).max(axis=(1, 2))
    vac = ~inner.any(axis=1)
    return {"slack": D - np.where(vac, 0.0, Din)}, vac


def sample_fellow(rng, n, delta, mu):
    R = rng.uniform(R_MIN, R_MAX)
    return {"o": origin(n), "p": _point(rng, n, R), "q": _point(rng, n, R)}


def eval_fellow(c, delta, mu):
    o, p, q = _o(c), c["p"], c["q"]
    d = hyp_distance(p, q)
    worst = np.zeros_like(d)
    for k in range(GRID_STEPS // 2 + 1):
        t = d * k / GRID_STEPS
        a = geodesic_point(p, q, t)
        b = geodesic_point(p, o, t)
        worst = np.maximum(worst, hyp_distance(a, b))
    return {"slack": 4 * delta - worst}


def sample_delzant(rng, n, delta, mu):
    R = rng.uniform(R_MIN, R_MAX)
    band = min(mu, R)
    for attempt in range(1, MAX_ATTEMPTS + 1):
        p = _point(rng, n, rng.uniform(R - band, R))
        g = _random_isometry(rng, n, 2.0)
        gp, gip = apply(g, p), apply(inverse(g), p)
        if radius(gp) <= R and radius(gip) <= R:
            return {"o": origin(n), "R": np.float64(R), "p": p, "gamma": g}, attempt
    raise ConvergenceError("delzant sampler starved")


def eval_delzant(c, delta, mu):
    p, g = c["p"], c["gamma"]
    m = hyp_midpoint(p, apply(g, p))
    return {"slack": mu + 9 * delta - hyp_distance(m, apply(inverse(g), m))}


def _near_boundary(rng, X, o, R, mu):
    r = hyp_distance(o, X)
    ok = np.nonzero(r >= R - mu)[0]
    return int(rng.choice(ok))


def sample_bary_approx(rng, n, delta, mu):
    o = origin(n)
    X = _ball_points(rng, n, DEFAULT_K, rng.uniform(R_MIN, R_MAX))
    R = float(hyp_distance(o, X).max())
    i = _near_boundary(rng, X, o, R, mu)
    return {"o": o, "R": np.float64(R), "X": X, "q": X[i]}


def eval_bary_approx(c, delta, mu):
    o, X, q = _o(c), c["X"], c["q"]
    D = _diameter(X)[0]
    xhat, _ = meb_exact_batch(X)
    target = geodesic_point(q, o, 0.5 * D, extend=True)
    return {"slack": 9 * delta + 1.5 * mu - hyp_distance(target, xhat)}


PAIR_KX, PAIR_KY = 6, 4


def sample_bary_pair(rng, n, delta, mu):
    o = origin(n)
    R = rng.uniform(R_MIN, R_MAX)
    q = _point(rng, n, R)
    X = np.vstack([q, _ball_points(rng, n, PAIR_KX - 1, R)])
    Y = np.vstack([q, _ball_points(rng, n, PAIR_KY - 1, R)])
    return {"o": o, "R": np.float64(R), "X": X, "Y": Y, "q": q}


def eval_bary_pair(c, delta, mu):
    X, Y = c["X"], c["Y"]
    DX, DY = _diameter(X)[0], _diameter(Y)[0]
    xhat, _ = meb_exact_batch(X)
    yhat, _ = meb_exact_batch(Y)
    d = hyp_distance(xhat, yhat)
    gap = 0.5 * np.abs(DX - DY)
    err = 18 * delta + 3 * mu
    return {"lower": d - (gap - err), "upper": (gap + err) - d}


JUMP_KX = 5


def sample_jump(rng, n, delta, mu):
    o = origin(n)
    for attempt in range(1, MAX_ATTEMPTS + 1):
        R0 = rng.uniform(R_MIN, R_MAX)
        X = _ball_points(rng, n, JUMP_KX, R0)
        g = _random_isometry(rng, n, 3.0)
        gX = apply(g, X)
        q = X[rng.integers(JUMP_KX)]
        q2 = gX[rng.integers(JUMP_KX)]
        Y = np.vstack([q, q2, _point(rng, n, rng.uniform(0, R0))])
        R = float(max(hyp_distance(o, X).max(), hyp_distance(o, gX).max(), hyp_distance(o, Y).max()))
        if (hyp_distance(o, q) >= R - mu and hyp_distance(o, q2) >= R - mu
                and _diameter(X[None])[0][0] >= _diameter(Y[None])[0][0]):
            return {"o": o, "R": np.float64(R), "X": X, "Y": Y, "gamma": g, "q": q, "q2": q2}, attempt
    raise ConvergenceError("jump sampler starved")


def eval_jump(c, delta, mu):
    X, g = c["X"], c["gamma"]
    xhat, _ = meb_exact_batch(X)
    return {"slack": 36 * delta + 6 * mu - hyp_distance(xhat, apply(g, xhat))}


@dataclass(frozen=True)
class Lemma:
    name: str
    sampler: object
    evaluator: object
    strict: bool = False


LEMMAS = {
    lem.name: lem for lem in [
        Lemma("delta", sample_delta, eval_delta),
        Lemma("annulus", sample_annulus, eval_annulus),
        Lemma("midpoint-in-ball", sample_midpoint_in_ball, eval_midpoint_in_ball),
        Lemma("set-containment", _sample_set(SET_K["set-containment"]), eval_set_containment),
        Lemma("barycenter-midpoint", _sample_set(SET_K["barycenter-midpoint"]), eval_barycenter_midpoint),
        Lemma("barycenter-bounds", _sample_set(DEFAULT_K), eval_barycenter_bounds),
        Lemma("extremal-cancellation", sample_extremal, eval_extremal, strict=True),
        Lemma("fellow-traveling", sample_fellow, eval_fellow),
        Lemma("delzant", sample_delzant, eval_delzant),
        Lemma("bary-approx", sample_bary_approx, eval_bary_approx),
        Lemma("bary-distance-pair", sample_bary_pair, eval_bary_pair),
        Lemma("jump", sample_jump, eval_jump),
    ]
}
LEMMA_IDS = list(LEMMAS)


# -- evaluation ---------------------------------------------------------------

def _stack(configs):
    return {k: np.stack([np.asarray(c[k]) for c in configs]) for k in configs[0]}


def _evaluate(lemma: Lemma, batch, delta, mu):
    out = lemma.evaluator(batch, delta, mu)
    if isinstance(out, tuple):
        return out
    n = next(iter(out.values())).shape[0]
    return out, np.zeros(n, bool)


def _outcome(name, cfg, delta, mu):
    lemma = LEMMAS[name]
    batch = {k: np.asarray(v, float)[None] for k, v in cfg.items()}
    slacks, vac = _evaluate(lemma, batch, delta, mu)
    return CheckOutcome(name, {k: float(v[0]) for k, v in slacks.items()},
                        {"delta": delta, "mu": mu}, cfg, lemma.strict, bool(vac[0]))


def sample_config(name: str, dim: int, seed: int, index: int, delta: float, mu: float):
    """The configuration for sample ``index`` of a sweep, and the number of sampler attempts."""
    rng = np.random.default_rng([seed, LEMMA_IDS.index(name), dim, index])
    out = LEMMAS[name].sampler(rng, dim, delta, mu)
    return out if isinstance(out, tuple) else (out, 1)


def _sweep_chunk(args):
    name, dim, seed, lo, hi, delta, mu, tol = args
    lemma = LEMMAS[name]
    configs, attempts = [], 0
    for i in range(lo, hi):
        cfg, a = sample_config(name, dim, seed, i, delta, mu)
        configs.append(cfg)
        attempts += a
    slacks, vac = _evaluate(lemma, _stack(configs), delta, mu)
    worst = np.min(np.stack(list(slacks.values())), axis=0)
    bad = (worst <= 0) if lemma.strict else (worst < -tol)
    failures = [{"sample": lo + int(k), **{s: float(v[k]) for s, v in slacks.items()}}
                for k in np.nonzero(bad)[0]]
    return failures, float(worst.min()), int(vac.sum()), attempts


def run_sweep(name: str, dim: int, samples: int, seed: int = 0, delta: float = 5.0,
              mu: float = 185.0, tol: float = 1e-9, jobs: int = 1, chunk: int = 2500) -> SweepResult:
    if name not in LEMMAS:
        raise PreconditionError(f"unknown lemma {name!r}; choose from {', '.join(LEMMA_IDS)}")
    if dim < 2:
        raise PreconditionError("dimension must be at least 2")
    tasks = [(name, dim, seed, lo, min(lo + chunk, samples), delta, mu, tol)
             for lo in range(0, samples, chunk)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sweep_chunk, tasks))
    else:
        parts = [_sweep_chunk(t) for t in tasks]
    failures = [f for p in parts for f in p[0]]
    failures.sort(key=lambda f: f["sample"])
    attempts = sum(p[3] for p in parts)
    return SweepResult(name, dim, samples, seed, delta, mu, tol, failures,
                       min(p[1] for p in parts), sum(p[2] for p in parts),
                       samples / attempts if attempts else 1.0)


# -- single-configuration checks ------------------------------------------------

def _pts(X):
    return np.array([np.asarray(x, float) for x in X])


def check_delta_inequality(o, p, q, delta) -> CheckOutcome:
    return _outcome("delta", {"o": o, "p": p, "q": q}, delta, 0.0)


def check_annulus(o, m, q, delta, tol: float = 1e-9) -> CheckOutcome:
    o, m, q = (np.asarray(v, float) for v in (o, m, q))
    if hyp_distance(o, q) < hyp_distance(o, m) - tol:
        raise PreconditionError("q must lie on the larger sphere")
    return _outcome("annulus", {"o": o, "m": m, "q": q}, delta, 0.0)


def check_midpoint_in_ball(o, R, p, q, delta, tol: float = 1e-9) -> CheckOutcome:
    if max(hyp_distance(o, p), hyp_distance(o, q)) > R + tol:
        raise PreconditionError("segment endpoints must lie in the ball")
    return _outcome("midpoint-in-ball", {"o": o, "R": R, "p": p, "q": q}, delta, 0.0)


def check_set_containment(X, delta) -> CheckOutcome:
    X = _pts(X)
    return _outcome("set-containment", {"o": origin(X.shape[1] - 1), "X": X}, delta, 0.0)


def check_barycenter_vs_midpoint(X, delta) -> CheckOutcome:
    X = _pts(X)
    return _outcome("barycenter-midpoint", {"o": origin(X.shape[1] - 1), "X": X}, delta, 0.0)


def check_barycenter_distance_bounds(o, X, delta) -> CheckOutcome:
    return _outcome("barycenter-bounds", {"o": o, "X": _pts(X)}, delta, 0.0)


def check_extremal_cancellation(o, X, delta) -> CheckOutcome:
    X = _pts(X)
    if len(X) < 2:
        raise PreconditionError("need at least two points")
    return _outcome("extremal-cancellation", {"o": o, "X": X}, delta, 0.0)


def check_fellow_traveling(o, R, p, q, delta, tol: float = 1e-7) -> CheckOutcome:
    if abs(hyp_distance(o, p) - R) > tol * (1 + R) or abs(hyp_distance(o, q) - R) > tol * (1 + R):
        raise PreconditionError("p and q must lie on the sphere of radius R")
    return _outcome("fellow-traveling", {"o": o, "p": p, "q": q}, delta, 0.0)


def check_delzant(o, R, gamma, p, mu, delta, tol: float = 1e-9) -> CheckOutcome:
    g = np.asarray(getattr(gamma, "matrix", gamma), float)
    p = np.asarray(p, float)
    if (hyp_distance(o, p) < R - mu - tol or hyp_distance(o, apply(g, p)) > R + tol
            or hyp_distance(o, apply(inverse(g), p)) > R + tol):
        raise PreconditionError("configuration violates the hypotheses")
    return _outcome("delzant", {"o": o, "R": R, "p": p, "gamma": g}, delta, mu)


def check_bary_approx(o, R, X, q, mu, delta, tol: float = 1e-9) -> CheckOutcome:
    X = _pts(X)
    if hyp_distance(o, X).max() > R + tol or hyp_distance(o, q) < R - mu - tol:
        raise PreconditionError("configuration violates the hypotheses")
    return _outcome("bary-approx", {"o": o, "R": R, "X": X, "q": q}, delta, mu)


def check_bary_distance_pair(o, R, X, Y, q, mu, delta, tol: float = 1e-9) -> CheckOutcome:
    X, Y = _pts(X), _pts(Y)
    if max(hyp_distance(o, X).max(), hyp_distance(o, Y).max()) > R + tol or hyp_distance(o, q) < R - mu - tol:
        raise PreconditionError("configuration violates the hypotheses")
    return _outcome("bary-distance-pair", {"o": o, "R": R, "X": X, "Y": Y, "q": q}, delta, mu)


def check_jump(o, R, X, Y, gamma, q, q2, mu, delta, tol: float = 1e-9) -> CheckOutcome:
    X, Y = _pts(X), _pts(Y)
    g = np.asarray(getattr(gamma, "matrix", gamma), float)
    gX = apply(g, X)
    if max(hyp_distance(o, X).max(), hyp_distance(o, gX).max(), hyp_distance(o, Y).max()) > R + tol:
        raise PreconditionError("sets must lie in the ball")
    if _diameter(X[None])[0][0] < _diameter(Y[None])[0][0]:
        raise PreconditionError("need |X| >= |Y|")
    return _outcome("jump", {"o": o, "R": R, "X": X, "Y": Y, "gamma": g, "q": q, "q2": q2}, delta, mu)
