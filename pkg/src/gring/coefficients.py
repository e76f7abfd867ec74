"""Exact coefficient domains (Q, F_p, Z) and exact linear solving over fields."""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, ParseError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Domain:
    """A coefficient domain.

    ``kind`` is ``"q"`` (rationals, values are :class:`Fraction`), ``"fp"``
    (prime field, values are ints in ``[0, p)``) or ``"z"`` (integers).
    """

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("q", "fp", "z"):
            raise DomainError(f"unknown domain kind {self.kind!r}")
        if self.kind == "fp" and not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.kind != "z"

    @property
    def zero(self):
        return Fraction(0) if self.kind == "q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "q" else 1

    def __call__(self, value):
        """Coerce an int or Fraction into this domain."""
        if self.kind == "q":
            return Fraction(value)
        if self.kind == "z":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise DomainError(f"{value} is not an integer")
                return value.numerator
            return int(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DomainError(f"denominator of {value} vanishes mod {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "fp" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "fp" else a - b

    def mul(self, a, b):
        return a * b % self.p if self.kind == "fp" else a * b

    def neg(self, a):
        return -a % self.p if self.kind == "fp" else -a

    def inv(self, a):
        if self.kind == "z":
            raise DomainError("the integers are not a field; inversion is undefined")
        if a == 0:
            raise ZeroDivisionError("inversion of zero")
        if self.kind == "fp":
            return pow(a, -1, self.p)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0

    def format(self, c) -> str:
        return str(c)

    def parse(self, text: str):
        m = _COEFF_RE.fullmatch(text.strip())
        if not m:
            raise ParseError(f"bad coefficient {text!r}")
        num = int(m.group(1))
        if m.group(2) is None:
            return self(num)
        den = int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return self(Fraction(num, den))

    def __str__(self) -> str:
        return {"q": "Q", "z": "Z"}.get(self.kind) or f"F_{self.p}"

    @property
    def spec(self) -> str:
        """The ``--field`` spelling of this domain."""
        return f"fp:{self.p}" if self.kind == "fp" else self.kind


_COEFF_RE = re.compile(r"([+-]?\d+)(?:/(\d+))?")

QQ = Domain("q")
ZZ = Domain("z")


def GF(p: int) -> Domain:
    return Domain("fp", p)


def parse_domain(text: str) -> Domain:
    t = text.strip().lower()
    if t in ("q", "qq", "rationals"):
        return QQ
    if t in ("z", "zz", "integers"):
        return ZZ
    if t.startswith("fp:"):
        try:
            return GF(int(t[3:]))
        except ValueError as exc:
            raise DomainError(f"bad field spec {text!r}") from exc
    raise DomainError(f"bad field spec {text!r}; use q, z or fp:<p>")


@dataclass
class LinearSolution:
    """Outcome of :func:`solve_linear`.

    ``solution`` is None when the system is inconsistent; ``kernel`` is always
    a basis of the homogeneous solution space.
    """

    solution: list | None
    kernel: list[list] = field(default_factory=list)
    rank: int = 0

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def solve_sparse(domain: Domain, rows: Sequence[dict], rhs: Sequence, ncols: int,
                 verify: bool = __debug__, max_kernel: int | None = None) -> LinearSolution:
    """Gauss-Jordan elimination on sparse rows ``{column: coefficient}``.

    Pivots are taken on the smallest remaining column of each row, so the
    kernel basis is the one read off the reduced row echelon form: one vector
    per free column, in increasing column order (truncated to ``max_kernel``).
    """
    if not domain.is_field:
        raise DomainError("solve_linear needs a field; solve integer systems over Q")
    zero = domain.zero
    add, mul, neg, inv = domain.add, domain.mul, domain.neg, domain.inv
    pivots: dict[int, tuple[dict, object]] = {}
    consistent = True
    for row_in, b in zip(rows, rhs):
        row = {c: domain(v) for c, v in row_in.items() if v != 0}
        b = domain(b)
        heap = [c for c in row if c in pivots]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            f = row.get(c)
            if f is None:
                continue
            prow, pb = pivots[c]
            for k, v in prow.items():
                old = row.get(k)
                nv = neg(mul(f, v)) if old is None else add(old, neg(mul(f, v)))
                if nv == 0:
                    row.pop(k, None)
                else:
                    if old is None and k in pivots:
                        heapq.heappush(heap, k)
                    row[k] = nv
            b = add(b, neg(mul(f, pb)))
        if not row:
            if b != 0:
                consistent = False
            continue
        c = min(row)
        s = inv(row[c])
        pivots[c] = ({k: mul(v, s) for k, v in row.items()}, mul(b, s))
    # back substitution; rows above are already free of other pivot columns
    for c in sorted(pivots, reverse=True):
        row, b = pivots[c]
        for k in [k for k in row if k != c and k in pivots]:
            f = row.pop(k)
            krow, kb = pivots[k]
            for j, v in krow.items():
                if j == k:
                    continue
                nv = add(row.get(j, zero), neg(mul(f, v)))
                if nv == 0:
                    row.pop(j, None)
                else:
                    row[j] = nv
            b = add(b, neg(mul(f, kb)))
        pivots[c] = (row, b)
    kernel = []
    by_free: dict[int, list] = {}
    for c, (row, _) in pivots.items():
        for j, v in row.items():
            if j != c:
                by_free.setdefault(j, []).append((c, v))
    for f in range(ncols):
        if f in pivots:
            continue
        if max_kernel is not None and len(kernel) >= max_kernel:
            break
        vec = [zero] * ncols
        vec[f] = domain.one
        for c, v in by_free.get(f, ()):
            vec[c] = neg(v)
        kernel.append(vec)
    solution = None
    if consistent:
        solution = [zero] * ncols
        for c, (_, pb) in pivots.items():
            solution[c] = pb
    result = LinearSolution(solution, kernel, len(pivots))
    if verify:
        _verify(domain, rows, rhs, result)
    return result


def _verify(domain, rows, rhs, result):
    def apply(vec):
        out = []
        for row in rows:
            acc = domain.zero
            for c, v in row.items():
                acc = domain.add(acc, domain.mul(domain(v), vec[c]))
            out.append(acc)
        return out

    if result.solution is not None:
        got = apply(result.solution)
        assert all(domain.sub(g, domain(b)) == 0 for g, b in zip(got, rhs)), \
            "solution failed substitution"
    for vec in result.kernel:
        assert all(v == 0 for v in apply(vec)), "kernel vector failed substitution"


def solve_linear(domain: Domain, matrix: Sequence[Sequence], rhs: Sequence | None = None) -> LinearSolution:
    """Solve ``matrix @ x = rhs`` exactly; ``rhs=None`` means the homogeneous system."""
    ncols = len(matrix[0]) if matrix else 0
    rows = [{j: domain(v) for j, v in enumerate(r) if v != 0} for r in matrix]
    rhs = [domain.zero] * len(rows) if rhs is None else [domain(b) for b in rhs]
    return solve_sparse(domain, rows, rhs, ncols)
