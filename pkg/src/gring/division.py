"""Division with remainder in kF_n driven by a relation ax + by = 0.

On a tree the extremal points of x are exactly the support points on the
boundary sphere of the smallest ball of ax, and each step cancels all of
them with translates of y.  Every claim the argument relies on is checked at
runtime and reported as :class:`ClaimViolation` if it ever fails.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ClaimViolation, DomainError, PreconditionError
from .ring import RingElement, format_element
from .words import dist2, format_word, translate, vertex, word_inv, word_key, word_mul


@dataclass(frozen=True)
class Relation:
    a: RingElement
    b: RingElement

    def holds(self, x: RingElement, y: RingElement) -> bool:
        return verify_relation(x, y, self)

    def left_mul(self, u: RingElement) -> "Relation":
        return Relation(u * self.a, u * self.b)

    def swapped(self) -> "Relation":
        return Relation(self.b, self.a)

    def to_json(self) -> dict:
        return {"a": format_element(self.a), "b": format_element(self.b)}


@dataclass(frozen=True)
class StepRecord:
    normalizer: tuple          # (coefficient, word) the relation was multiplied by the inverse of
    extremal: tuple            # extremal support words of x that were cancelled
    c: RingElement
    diameter2_before: int
    diameter2_after: int | None  # None when the step reached zero

    def to_json(self) -> dict:
        coeff, word = self.normalizer
        return {
            "normalizer": {"coefficient": str(coeff), "word": format_word(word)},
            "extremal": [format_word(w) for w in self.extremal],
            "c": format_element(self.c),
            "diameter2_before": self.diameter2_before,
            "diameter2_after": self.diameter2_after,
        }


@dataclass
class DivisionResult:
    quotient: RingElement
    remainder: RingElement
    trace: list = field(default_factory=list)
    relation: Relation | None = None   # relation carried to (remainder, y)

    def check(self, x: RingElement, y: RingElement) -> None:
        if self.quotient * y + self.remainder != x:
            raise ClaimViolation("result", "x != q*y + r")
        if self.remainder and self.remainder.diameter2 >= y.diameter2:
            raise ClaimViolation("result", "remainder is not smaller than the divisor")


def verify_relation(x: RingElement, y: RingElement, rel: Relation) -> bool:
    if not rel.a and not rel.b:
        return False
    return not (rel.a * x + rel.b * y)


def _check_inputs(x, y, rel):
    for e in (y, rel.a, rel.b):
        x._check(e)
    if not x.domain.is_field:
        raise DomainError(f"division needs a field, got {x.domain}")
    if not verify_relation(x, y, rel):
        raise PreconditionError("relation does not annihilate (x, y)")
    if x and y and (not rel.a or not rel.b):
        raise PreconditionError("relation with a zero coefficient would certify a zero divisor")


def division_step(x: RingElement, y: RingElement, rel: Relation, check: bool = True):
    """One cancellation step.  Returns ``(c, x1, rel1, record)`` with ``x1 = x - c*y``."""
    if check:
        _check_inputs(x, y, rel)
    if not x or not y:
        raise PreconditionError("division step needs nonzero x and y")
    dx, dy = x.diameter2, y.diameter2
    if dx < dy:
        raise PreconditionError(f"|x| = {dx} < |y| = {dy} (doubled)")
    D = x.domain
    a, b = rel.a, rel.b
    ball = (a * x).ball()
    center, r2 = ball.center, ball.radius2
    xs = x.support()

    # translates of supp(x) are all inside the ball of ax
    for g in a.terms:
        for w in xs:
            if dist2(center, vertex(word_mul(g, w))) > r2:
                raise ClaimViolation("containment", f"{format_word(g)}*x leaves the ball of ax")

    normalizer = None
    for g in a.support():
        if any(dist2(center, vertex(word_mul(g, w))) == r2 for w in xs):
            normalizer = g
            break
    if normalizer is None:
        raise ClaimViolation(1, "no x-translate reaches the boundary of ax")
    coeff = a.terms[normalizer]
    ginv = word_inv(normalizer)
    unit = RingElement.monomial(D, x.rank, ginv, D.inv(coeff))
    a1, b1 = unit * a, unit * b
    center1 = translate(ginv, center)

    extremal = [w for w in xs if dist2(center1, vertex(w)) == r2]
    ys = y.terms
    c_terms = {}
    for p in extremal:
        # p lies in exactly one x-translate (the identity one after normalizing)
        owners = [g for g in a1.terms if g != () and word_mul(word_inv(g), p) in x.terms]
        if owners:
            raise ClaimViolation(1, f"extremal point {format_word(p)} lies in several x-translates")
        rhos = [r for r in b1.terms if word_mul(word_inv(r), p) in ys]
        if len(rhos) != 1:
            raise ClaimViolation(1, f"extremal point {format_word(p)} lies in {len(rhos)} y-translates")
        rho = rhos[0]
        c_terms[rho] = D.neg(b1.terms[rho])
    c = RingElement(D, x.rank, c_terms)
    x1 = x - c * y
    rel1 = Relation(a1, b1 + a1 * c)

    if check and not verify_relation(x1, y, rel1) and (x1 or rel1.b):
        raise ClaimViolation("relation", "carried relation does not annihilate the new pair")
    for p in extremal:
        if p in x1.terms:
            raise ClaimViolation("extremal", f"extremal point {format_word(p)} survived")
    after = x1.diameter2 if x1 else None
    if after is not None and after >= dx:
        raise ClaimViolation(2, f"diameter did not drop ({dx} -> {after})")
    record = StepRecord((coeff, normalizer), tuple(extremal), c, dx, after)
    return c, x1, rel1, record


def divide(x: RingElement, y: RingElement, rel: Relation, check: bool = True) -> DivisionResult:
    """Return q, r with ``x = q*y + r`` and ``r = 0`` or ``|r| < |y|``."""
    if not y:
        raise PreconditionError("division by zero")
    _check_inputs(x, y, rel)
    zero = RingElement.zero(x.domain, x.rank)
    if not x:
        return DivisionResult(zero, zero, [], rel)
    dy = y.diameter2
    if x.diameter2 < dy:
        return DivisionResult(zero, x, [], rel)
    q, cur, r = zero, x, rel
    trace = []
    while cur and cur.diameter2 >= dy:
        c, cur, r, rec = division_step(cur, y, r, check=False)
        q = q + c
        trace.append(rec)
        if check and q * y + cur != x:
            raise ClaimViolation("accumulation", "x != q_partial*y + x_current")
    if check:
        if cur and not verify_relation(cur, y, r):
            raise ClaimViolation("relation", "carried relation does not annihilate (r, y)")
    result = DivisionResult(q, cur, trace, r)
    result.check(x, y)
    return result


__all__ = ["Relation", "StepRecord", "DivisionResult", "verify_relation", "division_step", "divide"]
