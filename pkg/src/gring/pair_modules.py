"""Freeness of the submodule generated by two vectors over kF_n and ZF_n."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .coefficients import QQ, ZZ
from .division import Relation, divide
from .errors import BudgetExceeded, ClaimViolation, DomainError, PreconditionError
from .euclid import exact_divide, relation_search_vectors
from .lattice import minimal_multiple
from .ring import RingElement, format_element, unit_normalize
from .words import Ball, ball_vertices, vertex, word_key, word_mul

ZERO_MODULE = "zero-module"
FREE_RANK_1 = "free-rank-1"
FREE_RANK_2 = "free-rank-2-at-budget"
NOT_FREE = "rank-1-not-free"
UNKNOWN = "unknown"

Vector = list  # list[RingElement]


@dataclass
class RankReport:
    verdict: str
    basis: Vector | None = None
    # v = c*z, w = c2*z, z = m1*v + m2*w
    c: RingElement | None = None
    c2: RingElement | None = None
    m1: RingElement | None = None
    m2: RingElement | None = None
    relation: Relation | None = None
    radius2: int = 0
    m: int | None = None
    details: dict = field(default_factory=dict)

    def verify(self, v: Vector, w: Vector) -> None:
        if self.verdict not in (FREE_RANK_1, NOT_FREE):
            return
        D = self.basis[0].domain
        D = QQ if D.kind == "z" else D

        def cast(e):
            return e.to_domain(D)

        c, c2, m1, m2 = map(cast, (self.c, self.c2, self.m1, self.m2))
        for vi, wi, zi in zip(v, w, self.basis):
            vi, wi, zi = cast(vi), cast(wi), cast(zi)
            if c * zi != vi or c2 * zi != wi:
                raise ClaimViolation("certificate", "v != c*z or w != c'*z")
            if m1 * vi + m2 * wi != zi:
                raise ClaimViolation("certificate", "z is not the stated combination of v, w")

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "radius2": self.radius2}
        if self.basis is not None:
            out["basis"] = [format_element(e) for e in self.basis]
            out["certificate"] = {
                "c": format_element(self.c), "c_prime": format_element(self.c2),
                "z_from_v": format_element(self.m1), "z_from_w": format_element(self.m2),
            }
        if self.relation is not None:
            out["relation"] = self.relation.to_json()
        if self.m is not None:
            out["m"] = self.m
        out.update(self.details)
        return out


def _check_vectors(v: Vector, w: Vector):
    if not v or len(v) != len(w):
        raise PreconditionError("v and w must be vectors of the same positive length")
    first = v[0]
    for e in list(v) + list(w):
        first._check(e)
    return first.domain, first.rank


def _is_zero(v: Vector) -> bool:
    return not any(v)


def _diam(e: RingElement) -> int:
    return e.diameter2 if e else -1


def _lmul(c: RingElement, v: Vector) -> Vector:
    return [c * e for e in v]


def _sub(v: Vector, u: Vector) -> Vector:
    return [a - b for a, b in zip(v, u)]


def analyze_field(v: Vector, w: Vector, search_radius2: int = 4, budget: int | None = None) -> RankReport:
    """Decide whether (v, w) is free of rank 2 (at the search budget), rank 1, or zero."""
    dom, rank = _check_vectors(v, w)
    if not dom.is_field:
        raise DomainError(f"analyze_field needs a field, got {dom}; use analyze_integral")
    zero = RingElement.zero(dom, rank)
    one = RingElement.one(dom, rank)
    v, w = list(v), list(w)
    if _is_zero(v) and _is_zero(w):
        return RankReport(ZERO_MODULE, radius2=search_radius2)
    if _is_zero(v) or _is_zero(w):
        z, c, c2, m1, m2 = (w, zero, one, zero, one) if _is_zero(v) else (v, one, zero, one, zero)
        return _finish(v, w, z, c, c2, m1, m2, None, search_radius2)
    try:
        rel = relation_search_vectors(v, w, search_radius2, budget)
    except BudgetExceeded as exc:
        return RankReport(UNKNOWN, radius2=search_radius2, details={"reason": str(exc)})
    if rel is None:
        return RankReport(FREE_RANK_2, radius2=search_radius2)

    best = max(_diam(e) for e in v + w)
    i = next(k for k in range(len(v)) if max(_diam(v[k]), _diam(w[k])) == best)
    # rows of cur = M @ (v, w); (v, w) = N @ rows of cur
    V, W, a, b = v, w, rel.a, rel.b
    M = [[one, zero], [zero, one]]
    N = [[one, zero], [zero, one]]
    if _diam(V[i]) < _diam(W[i]):
        V, W, a, b = W, V, b, a
        M = [M[1], M[0]]
        N = [[N[0][1], N[0][0]], [N[1][1], N[1][0]]]
    steps = 0
    while W[i]:
        res = divide(V[i], W[i], Relation(a, b))
        q = res.quotient
        V = _sub(V, _lmul(q, W))
        b = b + a * q
        M[0] = [M[0][0] - q * M[1][0], M[0][1] - q * M[1][1]]
        N = [[N[0][0], N[0][0] * q + N[0][1]], [N[1][0], N[1][0] * q + N[1][1]]]
        V, W, a, b = W, V, b, a
        M = [M[1], M[0]]
        N = [[N[0][1], N[0][0]], [N[1][1], N[1][0]]]
        steps += 1
    if not _is_zero(W):
        raise ClaimViolation("case 1", "pivot entry vanished but the other vector did not")
    report = _finish(v, w, V, N[0][0], N[1][0], M[0][0], M[0][1], rel, search_radius2)
    report.details["division_steps"] = steps
    report.details["pivot"] = i
    return report


def _finish(v, w, z, c, c2, m1, m2, rel, radius2) -> RankReport:
    k = next(j for j, e in enumerate(z) if e)
    _, unit = unit_normalize(z[k])
    inv = _unit_inverse(unit)
    z = _lmul(unit, z)
    report = RankReport(FREE_RANK_1, z, c * inv, c2 * inv, unit * m1, unit * m2, rel, radius2)
    report.verify(v, w)
    return report


def _unit_inverse(u: RingElement) -> RingElement:
    (word, coeff), = u.terms.items()
    inv_word = tuple(-s for s in reversed(word))
    return RingElement.monomial(u.domain, u.rank, inv_word, u.domain.inv(coeff))


def _primitive(z: Vector) -> Vector:
    """The primitive integral vector on the rational ray through z."""
    den = lcm(1, *(Fraction(c).denominator for e in z for c in e.terms.values()))
    ints = [{w: int(Fraction(c) * den) for w, c in e.terms.items()} for e in z]
    g = 0
    for t in ints:
        for c in t.values():
            g = gcd(g, c)
    rank = z[0].rank
    return [RingElement(ZZ, rank, {w: c // g for w, c in t.items()}) for t in ints]


def _columns(vecs):
    index = {}
    for e_vec in vecs:
        for i, e in enumerate(e_vec):
            for wd in e.terms:
                index.setdefault((i, wd), None)
    keys = sorted(index, key=lambda k: (k[0], word_key(k[1])))
    return {k: j for j, k in enumerate(keys)}


def analyze_integral(v: Vector, w: Vector, search_radius2: int = 4, budget: int | None = None) -> RankReport:
    """Analyse (v, w) over ZF_n: rational rank first, then the integral rescaling and m."""
    dom, rank = _check_vectors(v, w)
    if dom.kind != "z":
        raise DomainError("analyze_integral expects integer coefficients")
    vq = [e.to_domain(QQ) for e in v]
    wq = [e.to_domain(QQ) for e in w]
    rep = analyze_field(vq, wq, search_radius2, budget)
    if rep.verdict != FREE_RANK_1:
        return rep
    z_int = _primitive(rep.basis)

    # unknowns A, B of d*z_int = A*v + B*w live on a ball around the identity
    # large enough to hold the rational certificate
    cover = max((2 * len(g) for e in (rep.m1, rep.m2) for g in e.terms), default=0)
    lat_radius2 = max(search_radius2, cover)
    try:
        words = ball_vertices(Ball(vertex(()), lat_radius2), rank, budget)
    except BudgetExceeded as exc:
        return RankReport(UNKNOWN, radius2=search_radius2, details={"reason": str(exc)})
    gens_vec = [("a", g, [RingElement(ZZ, rank, {word_mul(g, u): c for u, c in e.terms.items()}) for e in v])
                for g in words]
    gens_vec += [("b", g, [RingElement(ZZ, rank, {word_mul(g, u): c for u, c in e.terms.items()}) for e in w])
                 for g in words]
    cols = _columns([vec for _, _, vec in gens_vec] + [z_int])

    def flat(vec):
        return {cols[(i, wd)]: c for i, e in enumerate(vec) for wd, c in e.terms.items()}

    found = minimal_multiple([((side, g), flat(vec)) for side, g, vec in gens_vec], flat(z_int))
    if found is None:
        return RankReport(UNKNOWN, radius2=search_radius2,
                          details={"reason": f"integral span at lattice radius2 {lat_radius2} misses z"})
    d, coeffs = found
    A = RingElement(ZZ, rank, {g: k for (side, g), k in coeffs.items() if side == "a"})
    B = RingElement(ZZ, rank, {g: k for (side, g), k in coeffs.items() if side == "b"})
    z = [e.scale(d) for e in z_int]
    for vi, wi, zi in zip(v, w, z):
        if A * vi + B * wi != zi:
            raise ClaimViolation("certificate", "d*z is not the integral combination found")

    k = next(j for j, e in enumerate(z) if e)
    zq = [e.to_domain(QQ) for e in z]
    c = exact_divide(vq[k], zq[k], budget)
    c2 = exact_divide(wq[k], zq[k], budget)
    if c is None or c2 is None:
        raise ClaimViolation("certificate", "rational cofactors of the rescaled basis are missing")
    m = lcm(1, *(Fraction(x).denominator for e in (c, c2) for x in e.terms.values()))
    verdict = FREE_RANK_1 if m == 1 else NOT_FREE
    if m == 1:
        c, c2 = c.to_domain(ZZ), c2.to_domain(ZZ)
    report = RankReport(verdict, z, c, c2, A, B, rep.relation, search_radius2, m,
                        details={"d": d, "lattice_radius2": lat_radius2})
    report.verify(v, w)
    return report


__all__ = [
    "RankReport", "analyze_field", "analyze_integral",
    "ZERO_MODULE", "FREE_RANK_1", "FREE_RANK_2", "NOT_FREE", "UNKNOWN",
]
