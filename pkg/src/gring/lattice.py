"""Integer row echelon form of sparse integer lattices, with transform tracking."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _xgcd(a: int, b: int):
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _comb(p: int, u: dict, q: int, v: dict) -> dict:
    out = {}
    for k in u.keys() | v.keys():
        val = p * u.get(k, 0) + q * v.get(k, 0)
        if val:
            out[k] = val
    return out


class IntegerEchelon:
    """Echelon basis of the Z-span of integer row vectors ``{column: value}``.

    Every basis row has a distinct leading (smallest) column with positive
    leading entry, and remembers its expression in the generators.
    """

    def __init__(self):
        self.rows: dict[int, tuple[dict, dict]] = {}

    def add(self, row: dict, label) -> None:
        self.insert(dict(row), {label: 1})

    def insert(self, r: dict, tr: dict) -> None:
        r = {k: v for k, v in r.items() if v}
        while r:
            c = min(r)
            if c not in self.rows:
                if r[c] < 0:
                    r = {k: -v for k, v in r.items()}
                    tr = {k: -v for k, v in tr.items()}
                self.rows[c] = (r, tr)
                return
            p, ptr = self.rows[c]
            g, s, t = _xgcd(p[c], r[c])
            pc, rc = p[c] // g, r[c] // g
            new_p, new_ptr = _comb(s, p, t, r), _comb(s, ptr, t, tr)
            r, tr = _comb(pc, r, -rc, p), _comb(pc, tr, -rc, ptr)
            self.rows[c] = (new_p, new_ptr)

    def coordinates(self, target: dict) -> dict | None:
        """Rational coefficients of ``target`` on the basis rows, keyed by leading column.

        Returns None when ``target`` is not in the rational span.
        """
        res = {k: Fraction(v) for k, v in target.items() if v}
        coords = {}
        for c in sorted(self.rows):
            if c not in res:
                continue
            row, _ = self.rows[c]
            f = res[c] / row[c]
            coords[c] = f
            for k, v in row.items():
                nv = res.get(k, 0) - f * v
                if nv:
                    res[k] = nv
                else:
                    res.pop(k, None)
        return None if res else coords

    def combination(self, coords: dict, scale: int) -> dict:
        """Integer generator coefficients of ``scale * sum(coords[c] * row_c)``."""
        out: dict = {}
        for c, f in coords.items():
            k = f * scale
            if k.denominator != 1:
                raise ValueError("scaled coordinate is not integral")
            for label, v in self.rows[c][1].items():
                out[label] = out.get(label, 0) + int(k) * v
        return {k: v for k, v in out.items() if v}


def minimal_multiple(gens: Sequence[tuple[object, dict]], target: dict):
    """Smallest d >= 1 with ``d*target`` in the Z-span of the generators.

    Returns ``(d, coefficients)`` with ``d*target == sum(coefficients[label] * row)``,
    or None when ``target`` is outside the rational span.
    """
    ech = IntegerEchelon()
    for label, row in gens:
        ech.add(row, label)
    coords = ech.coordinates(target)
    if coords is None:
        return None
    d = lcm(1, *(f.denominator for f in coords.values()))
    return d, ech.combination(coords, d)
