"""Exact audit of the constant chain behind the displacement threshold.

Quantities are affine forms in the symbols ``x`` (|x|), ``y`` (|y|), ``L``,
``delta`` and ``mu`` with rational coefficients, so every bound is assembled
from its pieces and then compared with the closed form it should equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from ..errors import ClaimViolation, PreconditionError

MU_OVER_DELTA = Fraction(37)
BUSER_DISPLACEMENT = 2000


class Affine:
    """Affine form ``sum(coef[s] * s) + const`` with Fraction coefficients."""

    __slots__ = ("coef",)

    def __init__(self, coef=None):
        self.coef = {k: Fraction(v) for k, v in (coef or {}).items() if v}

    @classmethod
    def sym(cls, name: str, k=1) -> "Affine":
        return cls({name: k})

    def __add__(self, other):
        other = other if isinstance(other, Affine) else Affine({"1": other})
        out = dict(self.coef)
        for k, v in other.coef.items():
            out[k] = out.get(k, 0) + v
        return Affine(out)

    __radd__ = __add__

    def __neg__(self):
        return Affine({k: -v for k, v in self.coef.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        return Affine({s: v * Fraction(k) for s, v in self.coef.items()})

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / Fraction(k))

    def __eq__(self, other):
        other = other if isinstance(other, Affine) else Affine({"1": other})
        return self.coef == other.coef

    def __hash__(self):
        return hash(frozenset(self.coef.items()))

    def at(self, **values) -> Fraction:
        return sum((v * Fraction(values[k] if k != "1" else 1) for k, v in self.coef.items()), Fraction(0))

    def __repr__(self):
        parts = [f"{v}*{k}" if k != "1" else str(v) for k, v in sorted(self.coef.items())]
        return " + ".join(parts) or "0"


X, Y, L, D, MU = (Affine.sym(s) for s in ("x", "y", "L", "delta", "mu"))


def _expect(name: str, got: Affine, want: Affine) -> None:
    if got != want:
        raise ClaimViolation("constants", f"{name}: assembled {got!r}, expected {want!r}")


@dataclass
class ConstantLedger:
    delta: Fraction
    mu: Fraction
    warmup: Fraction              # |x'|/2 exceeds |x|/2 by at most this
    midpoint: Fraction
    extremality: Fraction
    case1_radius: Fraction
    case1_threshold: Fraction
    case2_excess: Fraction        # d(x^, p) - |x|/2 in the second case
    case2_mu_min: Fraction
    conditions: dict = field(default_factory=dict)
    threshold: Fraction = Fraction(0)
    displacement: int = BUSER_DISPLACEMENT
    log_genus_bound: int = 0      # 2*sqrt(log g) >= displacement  <=>  log g >= this
    log_genus_minimal: Fraction = Fraction(0)
    satisfied: bool = False

    def to_json(self) -> dict:
        def f(v):
            return int(v) if v.denominator == 1 else str(v)
        return {
            "delta": f(self.delta), "mu": f(self.mu),
            "warmup": f(self.warmup), "midpoint": f(self.midpoint),
            "extremality": f(self.extremality),
            "case1_radius": f(self.case1_radius), "case1_threshold": f(self.case1_threshold),
            "case2_excess": f(self.case2_excess), "case2_mu_min": f(self.case2_mu_min),
            "conditions": {k: f(v) for k, v in self.conditions.items()},
            "threshold": f(self.threshold), "displacement": self.displacement,
            "satisfied": self.satisfied,
            "genus_log_bound": self.log_genus_bound,
            "genus_log_minimal": f(self.log_genus_minimal),
        }


def symbolic_chain(mu_over_delta: Fraction = MU_OVER_DELTA) -> dict:
    """The bounds as affine forms, each checked against its closed form."""
    mu = D * mu_over_delta
    # |x'|/2 <= (|x|-|y|)/2 + 18d + 3*5d + |y|/2 + d
    warm = (X - Y) / 2 + 18 * D + 3 * 5 * D + Y / 2 + D
    _expect("warm-up", warm, X / 2 + 34 * D)
    midpoint = (warm - X / 2) + D
    _expect("midpoint", midpoint, 35 * D)
    extremal = midpoint + 2 * D
    _expect("extremality", extremal, 37 * D)
    # barycentre gap (|x|-|y|)/2 + 18d + 3*37d, with |x|-|y| <= mu in the first case
    bary = (X - Y) / 2 + 18 * D + 3 * extremal
    case1 = bary - (X - Y) / 2 + MU / 2
    _expect("case 1 radius", case1, MU / 2 + 129 * D)
    case1_thr = 2 * case1
    _expect("case 1 threshold", case1_thr, MU + 258 * D)
    # second case: d(x^, p) <= (9d + 3/2*5d) + (|x|/2 - t) + 4d + (L - (mu - 5d))/2
    t = (L + MU - 5 * D) / 2
    case2 = (9 * D + Fraction(3, 2) * 5 * D) + (X / 2 - t) + 4 * D + (L - (MU - 5 * D)) / 2
    _expect("case 2", case2, X / 2 + Fraction(51, 2) * D - MU)
    # need case2 < |x|/2 - d, i.e. mu > 26.5 d
    case2_mu_min = (case2 - X / 2 + D) + MU
    _expect("case 2 mu", case2_mu_min, Fraction(53, 2) * D)
    conds = {
        "no_zero_divisors": 9 * D,
        "unique_cancellation": 14 * D,
        "jump": 36 * D + 6 * MU,
        "unique_translate": extremal + 9 * D,
        "case1": case1_thr,
    }
    return {
        "mu": mu, "warmup": warm - X / 2, "midpoint": midpoint, "extremality": extremal,
        "case1_radius": case1, "case1_threshold": case1_thr,
        "case2_excess": case2 - X / 2, "case2_mu_min": case2_mu_min, "conditions": conds,
    }


def audit_constants(delta, mu_over_delta=MU_OVER_DELTA, displacement: int = BUSER_DISPLACEMENT) -> ConstantLedger:
    """Evaluate the chain at ``delta`` with ``mu = mu_over_delta * delta``."""
    delta = Fraction(delta)
    if delta < 0:
        raise PreconditionError("delta must be non-negative")
    sym = symbolic_chain(Fraction(mu_over_delta))
    mu = sym["mu"].at(delta=delta)
    env = {"delta": delta, "mu": mu}

    def ev(a):
        return a.at(**env)

    if mu < ev(sym["extremality"]):
        raise ClaimViolation("constants", "mu must be at least the extremality constant")
    # second case needs mu > 26.5 delta; with delta = 0 the case is empty
    if delta > 0 and not mu > ev(sym["case2_mu_min"]):
        raise ClaimViolation("constants", "mu too small for the second case")
    conds = {k: ev(v) for k, v in sym["conditions"].items()}
    threshold = max(conds.values())
    if threshold != conds["case1"]:
        raise ClaimViolation("constants", "largest displacement condition is not the first case")
    # Buser: displacement >= 2 sqrt(log g)
    log_bound = (displacement // 2) ** 2 if displacement % 2 == 0 else Fraction(displacement, 2) ** 2
    return ConstantLedger(
        delta=delta, mu=mu,
        warmup=ev(sym["warmup"]), midpoint=ev(sym["midpoint"]),
        extremality=ev(sym["extremality"]),
        case1_radius=ev(sym["case1_radius"]), case1_threshold=ev(sym["case1_threshold"]),
        case2_excess=ev(sym["case2_excess"]), case2_mu_min=ev(sym["case2_mu_min"]),
        conditions=conds, threshold=threshold, displacement=displacement,
        log_genus_bound=int(log_bound), log_genus_minimal=(threshold / 2) ** 2,
        satisfied=threshold <= displacement,
    )


def displacement_for_log_genus(log_g: int) -> int:
    """Largest integer D with 2*sqrt(log g) >= D."""
    return isqrt(4 * log_g)
