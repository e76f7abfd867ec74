"""Elements of the group ring kF_n: arithmetic, support geometry, text syntax."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .coefficients import QQ, ZZ, Domain, GF
from .errors import DomainError, ParseError, PreconditionError
from .words import (
    LETTERS,
    Ball,
    TreePoint,
    check_rank,
    diameter2,
    dist2,
    format_word,
    smallest_ball,
    vertex,
    word_inv,
    word_key,
    word_mul,
)


class RingElement:
    """A finite linear combination of reduced words with nonzero coefficients.

    Instances are treated as immutable: every operation returns a new element
    and the term map is never mutated after construction.
    """

    __slots__ = ("domain", "rank", "terms", "_hash")

    def __init__(self, domain: Domain, rank: int, terms: Mapping | Iterable = ()):
        self.domain = domain
        self.rank = rank
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for w, c in items:
            c = domain(c)
            if c != 0:
                clean[tuple(w)] = c
        self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, domain, rank, terms):
        obj = cls.__new__(cls)
        obj.domain, obj.rank, obj.terms, obj._hash = domain, rank, terms, None
        return obj

    @classmethod
    def zero(cls, domain: Domain, rank: int) -> "RingElement":
        return cls._raw(domain, rank, {})

    @classmethod
    def one(cls, domain: Domain, rank: int) -> "RingElement":
        return cls._raw(domain, rank, {(): domain.one})

    @classmethod
    def monomial(cls, domain: Domain, rank: int, word=(), coeff=1) -> "RingElement":
        return cls(domain, rank, {tuple(word): coeff})

    def like(self, terms) -> "RingElement":
        return RingElement(self.domain, self.rank, terms)

    # basic protocol -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, RingElement):
            return (self.domain == other.domain and self.rank == other.rank
                    and self.terms == other.terms)
        if isinstance(other, (int, Fraction)):
            return self == self.like({(): other})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.domain, self.rank, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"RingElement({self.domain}, rank={self.rank}, {format_element(self)!r})"

    def __str__(self) -> str:
        return format_element(self)

    def coefficient(self, w) -> object:
        return self.terms.get(tuple(w), self.domain.zero)

    def support(self) -> list:
        """Support words sorted by length, then lexicographically."""
        return sorted(self.terms, key=word_key)

    def sorted_terms(self):
        return [(w, self.terms[w]) for w in self.support()]

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "RingElement"):
        if self.domain != other.domain:
            raise DomainError(f"domain mismatch: {self.domain} vs {other.domain}")
        if self.rank != other.rank:
            raise DomainError(f"rank mismatch: {self.rank} vs {other.rank}")

    def _coerce(self, other):
        if isinstance(other, RingElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.like({(): other})
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        add = self.domain.add
        terms = dict(self.terms)
        for w, c in other.terms.items():
            nc = add(terms[w], c) if w in terms else c
            if nc == 0:
                terms.pop(w, None)
            else:
                terms[w] = nc
        return RingElement._raw(self.domain, self.rank, terms)

    __radd__ = __add__

    def __neg__(self):
        neg = self.domain.neg
        return RingElement._raw(self.domain, self.rank, {w: neg(c) for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "RingElement":
        c = self.domain(c)
        if c == 0:
            return RingElement.zero(self.domain, self.rank)
        mul = self.domain.mul
        return RingElement._raw(self.domain, self.rank, {w: mul(c, v) for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        self._check(other)
        add, mul = self.domain.add, self.domain.mul
        out: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = word_mul(u, v)
                c = mul(a, b)
                if w in out:
                    nc = add(out[w], c)
                    if nc == 0:
                        del out[w]
                    else:
                        out[w] = nc
                else:
                    out[w] = c
        return RingElement._raw(self.domain, self.rank, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def translate(self, g) -> "RingElement":
        """Left multiplication by the group element ``g``."""
        g = tuple(g)
        return RingElement._raw(self.domain, self.rank,
                                {word_mul(g, w): c for w, c in self.terms.items()})

    def right_translate(self, g) -> "RingElement":
        g = tuple(g)
        return RingElement._raw(self.domain, self.rank,
                                {word_mul(w, g): c for w, c in self.terms.items()})

    def to_domain(self, domain: Domain) -> "RingElement":
        return RingElement(domain, self.rank, self.terms)

    # geometry -------------------------------------------------------------

    @property
    def diameter2(self) -> int:
        if not self.terms:
            raise PreconditionError("the zero element has no support")
        return diameter2(self.terms)[0]

    def ball(self) -> Ball:
        if not self.terms:
            raise PreconditionError("the zero element has no support")
        return smallest_ball(self.terms)

    def geometry(self) -> "SupportGeometry":
        return geometry(self)


def add(x: RingElement, y: RingElement) -> RingElement:
    return x + y


def neg(x: RingElement) -> RingElement:
    return -x


def scale(c, x: RingElement) -> RingElement:
    return x.scale(c)


def mul(x: RingElement, y: RingElement) -> RingElement:
    return x * y


def mul_naive(x: RingElement, y: RingElement) -> RingElement:
    """Convolution written out from the definition; an oracle for tests."""
    x._check(y)
    acc = {}
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            w = word_mul(u, v)
            acc.setdefault(w, []).append(x.domain.mul(a, b))
    total = {}
    for w, cs in acc.items():
        s = x.domain.zero
        for c in cs:
            s = x.domain.add(s, c)
        total[w] = s
    return RingElement(x.domain, x.rank, total)


@dataclass(frozen=True)
class SupportGeometry:
    support: tuple
    diameter2: int
    ball: Ball
    boundary: tuple


def geometry(x: RingElement) -> SupportGeometry:
    if not x:
        raise PreconditionError("geometry of the zero element is undefined")
    supp = tuple(x.support())
    d2, _ = diameter2(supp)
    ball = smallest_ball(supp)
    boundary = tuple(w for w in supp if dist2(ball.center, vertex(w)) == ball.radius2)
    return SupportGeometry(supp, d2, ball, boundary)


def extremal_points(x: RingElement, b: Ball) -> list:
    """Support points of ``x`` lying exactly on the boundary sphere of ``b``."""
    out = []
    for w in x.support():
        d = dist2(b.center, vertex(w))
        if d > b.radius2:
            raise PreconditionError(
                f"support point {format_word(w)} escapes the ball "
                f"(doubled distance {d} > {b.radius2})")
        if d == b.radius2:
            out.append(w)
    return out


def barycenter(x: RingElement) -> TreePoint:
    return x.ball().center


def reduce_mod_p(x: RingElement, p: int) -> RingElement:
    if x.domain.kind == "fp":
        raise DomainError("element is already over a prime field")
    F = GF(p)
    terms = {}
    for w, c in x.terms.items():
        c = Fraction(c)
        if c.denominator != 1:
            raise DomainError(f"coefficient {c} is not integral")
        terms[w] = c.numerator
    return RingElement(F, x.rank, terms)


def unit_normalize(x: RingElement) -> tuple[RingElement, RingElement]:
    """Left-multiply by the unit that sends the smallest support word to 1 with coefficient 1.

    Returns ``(normalized, unit)`` with ``normalized == unit * x``.
    """
    if not x:
        return x, RingElement.one(x.domain, x.rank)
    w = x.support()[0]
    c = x.terms[w]
    unit = RingElement.monomial(x.domain, x.rank, word_inv(w), x.domain.inv(c))
    return unit * x, unit


# -- text syntax ------------------------------------------------------------

def letter_index(ch: str, rank: int) -> int | None:
    i = LETTERS.find(ch)
    if i < 0 or i >= rank:
        return None
    return i + 1


def format_coeff(domain: Domain, c) -> str:
    return str(c)


def format_element(x: RingElement) -> str:
    if not x.terms:
        return "0"
    out = []
    for w, c in x.sorted_terms():
        neg_c = x.domain.kind != "fp" and c < 0
        mag = -c if neg_c else c
        if not w:
            body = format_coeff(x.domain, mag)
        elif mag == 1:
            body = format_word(w)
        else:
            body = f"{format_coeff(x.domain, mag)}*{format_word(w)}"
        if neg_c:
            out.append("-" + body)
        else:
            out.append(("+" if out else "") + body)
    return "".join(out)


class _Parser:
    def __init__(self, text: str, domain: Domain, rank: int, line=None):
        self.s = text
        self.i = 0
        self.domain = domain
        self.rank = rank
        self.line = line

    def error(self, msg, pos=None):
        raise ParseError(msg, self.i if pos is None else pos, self.line)

    def skip(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.s[self.i] if self.i < len(self.s) else ""

    def integer(self):
        self.skip()
        j = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if j == self.i:
            self.error("expected an integer")
        return int(self.s[j:self.i])

    def element(self) -> RingElement:
        terms: list = []
        if not self.peek():
            self.error("empty element")
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.s[self.i] == "-" else 1
            self.i += 1
        terms.append(self.term(sign))
        while self.peek():
            ch = self.peek()
            if ch not in "+-":
                self.error(f"unexpected {ch!r}")
            self.i += 1
            terms.append(self.term(-1 if ch == "-" else 1))
        acc = {}
        D = self.domain
        for w, c in terms:
            acc[w] = D.add(acc[w], c) if w in acc else c
        return RingElement(D, self.rank, acc)

    def term(self, sign):
        D = self.domain
        ch = self.peek()
        if ch in "+-":
            self.i += 1
            if ch == "-":
                sign = -sign
            ch = self.peek()
        if ch.isdigit():
            start = self.i
            num = self.integer()
            den = 1
            if self.peek() == "/":
                self.i += 1
                den = self.integer()
                if den == 0:
                    self.error("zero denominator", start)
            try:
                coeff = D(Fraction(sign * num, den))
            except DomainError as exc:
                self.error(str(exc), start)
            if self.peek() == "*":
                self.i += 1
                return self.word(), coeff
            return (), coeff
        if not ch:
            self.error("expected a term")
        return self.word(), D(sign)

    def word(self):
        self.skip()
        if self.peek() == "1":
            self.i += 1
            return ()
        letters = []
        start = self.i
        while self.i < len(self.s) and self.s[self.i].isalpha():
            pos = self.i
            idx = letter_index(self.s[self.i], self.rank)
            if idx is None:
                self.error(f"unknown generator {self.s[self.i]!r} for rank {self.rank}", pos)
            self.i += 1
            s = idx
            if self.i < len(self.s) and self.s[self.i] == "'":
                s = -s
                self.i += 1
            power = 1
            if self.i < len(self.s) and self.s[self.i] == "^":
                self.i += 1
                neg = False
                if self.i < len(self.s) and self.s[self.i] in "+-":
                    neg = self.s[self.i] == "-"
                    self.i += 1
                power = self.integer()
                if neg:
                    power = -power
            if power < 0:
                s, power = -s, -power
            letters.extend([s] * power)
        if self.i == start:
            self.error("expected a word")
        out: list = []
        for s in letters:
            if out and out[-1] == -s:
                out.pop()
            else:
                out.append(s)
        return tuple(out)


def parse_element(text: str, domain: Domain = QQ, rank: int = 2, line=None) -> RingElement:
    """Parse the element grammar, e.g. ``"3/2*gh' - 1 + g^2"``."""
    check_rank(rank)
    return _Parser(text, domain, rank, line).element()


def parse_lines(text: str, domain: Domain = QQ, rank: int = 2) -> list:
    """One element per line; ``#`` starts a comment; blank lines are skipped."""
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            out.append(parse_element(body, domain, rank, line=n))
    return out


def parse_word(text: str, rank: int = 2):
    x = parse_element(text, QQ, rank)
    if len(x) != 1 or x.sorted_terms()[0][1] != 1:
        raise ParseError(f"{text!r} is not a single group element")
    return x.support()[0]


__all__ = [
    "RingElement", "SupportGeometry", "add", "neg", "scale", "mul", "mul_naive",
    "geometry", "extremal_points", "barycenter", "reduce_mod_p", "unit_normalize",
    "format_element", "parse_element", "parse_lines", "parse_word", "QQ", "ZZ", "GF",
]
