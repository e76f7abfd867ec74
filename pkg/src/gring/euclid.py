"""Euclid's algorithm, exact division, bounded relation search and a related-pair generator."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .coefficients import QQ, Domain, solve_sparse
from .division import DivisionResult, Relation, divide, verify_relation
from .errors import ClaimViolation, DomainError, PreconditionError
from .ring import RingElement, format_element, unit_normalize
from .words import (
    TreePoint,
    dist2,
    translate,
    check_rank,
    smallest_ball,
    translates_within,
    vertex,
    word_inv,
    word_mul,
)

IDENTITY_POINT = vertex(())


# -- exact division -----------------------------------------------------------

def _to_rational(x: RingElement) -> RingElement:
    return x.to_domain(QQ) if x.domain.kind == "z" else x


def _from_rational(x: RingElement, domain: Domain) -> RingElement | None:
    if domain.kind != "z":
        return x
    if any(Fraction(c).denominator != 1 for c in x.terms.values()):
        return None
    return x.to_domain(domain)


def exact_divide(x: RingElement, z: RingElement, budget: int | None = None) -> RingElement | None:
    """The unique ``c`` with ``x == c*z``, or None when there is none.

    Raises :class:`BudgetExceeded` when the candidate set is too large to
    enumerate; that outcome means "unknown", not "none".
    """
    x._check(z)
    if not z:
        raise PreconditionError("exact division by zero")
    if not x:
        return RingElement.zero(x.domain, x.rank)
    gx, gz = smallest_ball(x.terms), smallest_ball(z.terms)
    if gx.radius2 < gz.radius2:
        return None
    cands = translates_within(gz.center, gx.center, gx.radius2 - gz.radius2, x.rank, budget)
    xq, zq = _to_rational(x), _to_rational(z)
    D = xq.domain
    row_of: dict = {}
    rows: list[dict] = []
    rhs: list = []

    def row(w):
        i = row_of.get(w)
        if i is None:
            i = row_of[w] = len(rows)
            rows.append({})
            rhs.append(xq.terms.get(w, D.zero))
        return rows[i]

    for j, g in enumerate(cands):
        for w, c in zq.terms.items():
            row(word_mul(g, w))[j] = c
    if any(w not in row_of for w in xq.terms):
        return None
    sol = solve_sparse(D, rows, rhs, len(cands), max_kernel=0)
    if sol.solution is None:
        return None
    c = RingElement(D, x.rank, {g: v for g, v in zip(cands, sol.solution)})
    c = _from_rational(c, x.domain)
    if c is None:
        return None
    if c * z != x:
        raise ClaimViolation("exact_divide", "solution failed to reproduce x")
    return c


# -- relation search ------------------------------------------------------------

def _union_center(elts: Sequence[RingElement]) -> TreePoint:
    words = set()
    for e in elts:
        words.update(e.terms)
    if not words:
        raise PreconditionError("relation search needs nonzero inputs")
    return smallest_ball(words).center


def relation_search_vectors(xs: Sequence[RingElement], ys: Sequence[RingElement], radius2: int,
                            budget: int | None = None) -> Relation | None:
    """Find (a, b) != 0 with ``a*xs[i] + b*ys[i] == 0`` for every i, or None at this budget.

    The unknown coefficients of a live on the group elements g with
    ``dist2(g*w_x, 1) <= radius2``, where w_x is the anchor vertex of the
    barycenter of the union of the supports of xs (the vertex itself, or the
    shorter endpoint of a midpoint); likewise for b.  Equivalently x and y
    are recentred near the identity and the unknowns sit on a ball there.
    """
    if len(xs) != len(ys) or not xs:
        raise PreconditionError("vector lengths differ or are zero")
    first = xs[0]
    for e in list(xs) + list(ys):
        first._check(e)
    rank, dom = first.rank, first.domain
    ca = translates_within(vertex(_union_center(xs).word), IDENTITY_POINT, radius2, rank, budget)
    cb = translates_within(vertex(_union_center(ys).word), IDENTITY_POINT, radius2, rank, budget)
    na = len(ca)
    ncols = na + len(cb)
    work = QQ if dom.kind == "z" else dom
    rows: list[dict] = []
    for i, (x, y) in enumerate(zip(xs, ys)):
        local: dict = {}
        for j, g in enumerate(ca):
            for w, c in x.terms.items():
                local.setdefault(word_mul(g, w), {})[j] = work(c)
        for j, g in enumerate(cb):
            for w, c in y.terms.items():
                local.setdefault(word_mul(g, w), {})[na + j] = work(c)
        rows.extend(local[w] for w in sorted(local))
    sol = solve_sparse(work, rows, [work.zero] * len(rows), ncols, max_kernel=1)
    if not sol.kernel:
        return None
    vec = sol.kernel[0]
    if dom.kind == "z":
        den = lcm(*(Fraction(v).denominator for v in vec))
        ints = [int(Fraction(v) * den) for v in vec]
        g = 0
        for v in ints:
            g = gcd(g, v)
        vec = [v // g for v in ints]
    a = RingElement(dom, rank, {g: v for g, v in zip(ca, vec[:na])})
    b = RingElement(dom, rank, {g: v for g, v in zip(cb, vec[na:])})
    if not a or not b:
        raise ClaimViolation("relation", "kernel vector has a zero side (zero divisor?)")
    a, b = _normalize_relation(a, b)
    for x, y in zip(xs, ys):
        if a * x + b * y:
            raise ClaimViolation("relation", "found relation fails to verify")
    return Relation(a, b)


def _normalize_relation(a: RingElement, b: RingElement):
    """Left-translate so the smallest support word of a is 1 (coefficient 1 over fields)."""
    w = a.support()[0]
    D = a.domain
    if D.is_field:
        unit = RingElement.monomial(D, a.rank, word_inv(w), D.inv(a.terms[w]))
    else:
        unit = RingElement.monomial(D, a.rank, word_inv(w), 1 if a.terms[w] > 0 else -1)
    return unit * a, unit * b


def relation_search(x: RingElement, y: RingElement, radius2: int,
                    budget: int | None = None) -> Relation | None:
    if not x or not y:
        raise PreconditionError("relation search needs nonzero x and y")
    return relation_search_vectors([x], [y], radius2, budget)


def relation_radius2(xs: Sequence[RingElement], ys: Sequence[RingElement], rel: Relation) -> int:
    """Smallest radius2 at which the unknowns of :func:`relation_search_vectors` cover ``rel``."""
    wx, wy = vertex(_union_center(xs).word), vertex(_union_center(ys).word)
    da = max(dist2(translate(g, wx), IDENTITY_POINT) for g in rel.a.terms)
    db = max(dist2(translate(g, wy), IDENTITY_POINT) for g in rel.b.terms)
    return max(da, db)


def sufficient_radius2(x: RingElement, y: RingElement, rel: Relation) -> int:
    """A search radius at which :func:`relation_search` is guaranteed to find some relation.

    After translating ``rel`` so the center of the ball of ``a*x`` is within
    half an edge of the identity, every ``g*xhat`` (g in supp a) and
    ``r*yhat`` (r in supp b) lies within ``R(ax) - R(x)`` resp.
    ``R(ax) - R(y)`` of that center; anchoring adds at most another half edge.
    """
    big = (rel.a * x).ball().radius2
    return big - min(x.ball().radius2, y.ball().radius2) + 2


# -- Euclid --------------------------------------------------------------------

@dataclass
class ChainLink:
    s: RingElement
    t: RingElement
    relation: Relation
    quotient: RingElement
    remainder: RingElement
    division: DivisionResult

    def to_json(self) -> dict:
        return {
            "pair": [format_element(self.s), format_element(self.t)],
            "relation": self.relation.to_json(),
            "quotient": format_element(self.quotient),
            "remainder": format_element(self.remainder),
        }


@dataclass
class EuclidResult:
    gcd: RingElement
    bezout: tuple
    cofactors: tuple
    chain: list = field(default_factory=list)

    def verify(self, x: RingElement, y: RingElement) -> None:
        z = self.gcd
        a, b = self.bezout
        c, c2 = self.cofactors
        if a * x + b * y != z:
            raise ClaimViolation("bezout", "z != a'x + b'y")
        if c * z != x or c2 * z != y:
            raise ClaimViolation("cofactors", "x != c*z or y != c'*z")
        for i in range(1, len(self.chain)):
            before, after = self.chain[i - 1].remainder, self.chain[i].remainder
            if after and after.diameter2 >= before.diameter2:
                raise ClaimViolation("chain", "remainder diameters do not decrease")

    def to_json(self) -> dict:
        return {
            "gcd": format_element(self.gcd),
            "bezout": [format_element(e) for e in self.bezout],
            "cofactors": [format_element(e) for e in self.cofactors],
            "chain": [link.to_json() for link in self.chain],
        }


def euclid(x: RingElement, y: RingElement, rel: Relation, budget: int | None = None) -> EuclidResult:
    """Greatest common (right) divisor of x and y, with Bezout data and cofactors."""
    if not x or not y:
        raise PreconditionError("euclid needs nonzero x and y")
    if not x.domain.is_field:
        raise DomainError(f"euclid needs a field, got {x.domain}")
    if not verify_relation(x, y, rel):
        raise PreconditionError("relation does not annihilate (x, y)")
    zero = RingElement.zero(x.domain, x.rank)
    one = RingElement.one(x.domain, x.rank)
    # r_{k} = A_k x + B_k y, starting from r_{-1} = x, r_0 = y
    prev, cur = (x, one, zero), (y, zero, one)
    alpha, beta = rel.a, rel.b
    chain = []
    while True:
        s, t = prev[0], cur[0]
        if not alpha:
            raise ClaimViolation("relation", "relation degenerated mid-chain")
        res = divide(s, t, Relation(alpha, beta))
        q, r = res.quotient, res.remainder
        chain.append(ChainLink(s, t, Relation(alpha, beta), q, r, res))
        if not r:
            break
        nxt = (r, prev[1] - q * cur[1], prev[2] - q * cur[2])
        alpha, beta = beta + alpha * q, alpha
        prev, cur = cur, nxt
        if not verify_relation(prev[0], cur[0], Relation(alpha, beta)):
            raise ClaimViolation("relation", "propagated relation fails")
    z, A, B = cur
    z, unit = unit_normalize(z)
    A, B = unit * A, unit * B
    c = exact_divide(x, z, budget)
    c2 = exact_divide(y, z, budget)
    if c is None or c2 is None:
        raise ClaimViolation("gcd", "gcd does not divide the inputs")
    result = EuclidResult(z, (A, B), (c, c2), chain)
    result.verify(x, y)
    return result


# -- related pairs ---------------------------------------------------------------

@dataclass
class PairSpec:
    x: RingElement
    y: RingElement
    rel: Relation
    z0: RingElement
    script: list            # [("init", a), ("x", u), ("y", v), ...]
    seed: int | None = None
    depth: int = 1

    def to_json(self) -> dict:
        return {
            "x": format_element(self.x),
            "y": format_element(self.y),
            "relation": self.rel.to_json(),
            "z0": format_element(self.z0),
            "script": [[k, format_element(e)] for k, e in self.script],
            "seed": self.seed,
            "depth": self.depth,
        }


def build_pair(z0: RingElement, a: RingElement, updates: Sequence[RingElement] = ()) -> PairSpec:
    """Start from (z0, a*z0) and apply x += u*y, y += v*x alternately (starting with x)."""
    if not z0 or not a:
        raise PreconditionError("z0 and a must be nonzero")
    x, y = z0, a * z0
    alpha, beta = a, -RingElement.one(z0.domain, z0.rank)
    script = [("init", a)]
    for k, u in enumerate(updates):
        if k % 2 == 0:
            x = x + u * y
            beta = beta - alpha * u
            script.append(("x", u))
        else:
            y = y + u * x
            alpha = alpha - beta * u
            script.append(("y", u))
    rel = Relation(alpha, beta)
    if not verify_relation(x, y, rel):
        raise ClaimViolation("generator", "tracked relation fails")
    return PairSpec(x, y, rel, z0, script, depth=len(updates) + 1)


def random_word(rng: random.Random, rank: int, max_len: int) -> tuple:
    n = rng.randint(0, max_len)
    out: list = []
    while len(out) < n:
        s = rng.choice([i for i in range(-rank, rank + 1) if i])
        if out and out[-1] == -s:
            continue
        out.append(s)
    return tuple(out)


def random_element(rng: random.Random, domain: Domain, rank: int, max_terms: int = 3,
                   max_len: int = 2, max_coeff: int = 3) -> RingElement:
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            c = rng.randint(-max_coeff, max_coeff)
            if c:
                terms[random_word(rng, rank, max_len)] = c
        e = RingElement(domain, rank, terms)
        if e:
            return e


def _within(e: RingElement, max_support: int, max_diameter2: int) -> bool:
    return bool(e) and len(e) <= max_support and e.diameter2 <= max_diameter2


def generate_pair(seed: int, depth: int, rank: int = 2, domain: Domain = QQ,
                  max_support: int = 12, max_diameter2: int = 24, tries: int = 50) -> PairSpec:
    """A seeded random pair (x, y) with a planted common divisor z0 and a known relation."""
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    check_rank(rank)
    rng = random.Random(f"{seed}:{depth}:{rank}:{domain.spec}")
    while True:
        z0 = random_element(rng, domain, rank, 3, 2)
        a = random_element(rng, domain, rank, 2, 1)
        spec = build_pair(z0, a)
        if not (_within(spec.x, max_support, max_diameter2) and _within(spec.y, max_support, max_diameter2)):
            continue
        updates: list = []
        for _ in range(depth - 1):
            for _ in range(tries):
                u = random_element(rng, domain, rank, 2, 1)
                trial = build_pair(z0, a, updates + [u])
                if _within(trial.x, max_support, max_diameter2) and _within(trial.y, max_support, max_diameter2):
                    updates.append(u)
                    spec = trial
                    break
            else:
                break
        if len(updates) == depth - 1:
            spec.seed = seed
            return spec


__all__ = [
    "exact_divide", "relation_search", "relation_search_vectors", "sufficient_radius2",
    "euclid", "EuclidResult", "ChainLink", "PairSpec", "build_pair", "generate_pair",
    "random_element", "random_word",
]
