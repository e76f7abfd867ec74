"""Reduced words in the free group F_n and the geometry of its Cayley tree.

A word is a tuple of nonzero ints: ``i`` is the i-th generator and ``-i`` its
inverse (generators are numbered from 1).  Distances are *doubled* so that
edge midpoints, radii and diameters are all integers.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetExceeded, PreconditionError, WordError

Word = tuple

IDENTITY: Word = ()

# rank 1 -> g, rank 2 -> g, h, rank 3 -> g, h, i, ...
LETTERS = "ghijklmnopqrstuvwxyzabcdef"

DEFAULT_BALL_BUDGET = 200_000


def check_rank(rank: int) -> int:
    if not isinstance(rank, int) or rank < 1 or rank > len(LETTERS):
        raise WordError(f"rank must be an integer in 1..{len(LETTERS)}, got {rank!r}")
    return rank


def reduce_word(letters: Iterable[int], rank: int | None = None) -> Word:
    """Freely reduce a sequence of signed letters."""
    out: list[int] = []
    for s in letters:
        if s == 0 or (rank is not None and abs(s) > rank):
            raise WordError(f"letter {s} out of range for rank {rank}")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1)) and 0 not in w


def word_mul(u: Word, v: Word) -> Word:
    k = 0
    n = min(len(u), len(v))
    while k < n and u[-1 - k] == -v[k]:
        k += 1
    return u[: len(u) - k] + v[k:]


def word_inv(u: Word) -> Word:
    return tuple(-s for s in reversed(u))


def word_key(w: Word):
    """Total order used everywhere for determinism: length, then lexicographic
    on signed letters, so ``h' < g' < g < h``."""
    return (len(w), w)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        s, run = w[i], j - i
        ch = LETTERS[abs(s) - 1]
        if run == 1:
            parts.append(ch + ("'" if s < 0 else ""))
        else:
            parts.append(f"{ch}^{run if s > 0 else -run}")
        i = j
    return "".join(parts)


def _prefix_len(u: Word, v: Word) -> int:
    k = 0
    n = min(len(u), len(v))
    while k < n and u[k] == v[k]:
        k += 1
    return k


def word_distance(u: Word, v: Word) -> int:
    """Undoubled tree distance |u^-1 v| between two vertices."""
    k = _prefix_len(u, v)
    return len(u) + len(v) - 2 * k


@dataclass(frozen=True, order=False)
class TreePoint:
    """A vertex (``letter == 0``) or the midpoint of the edge from ``word`` to ``word*letter``.

    Edge midpoints are stored anchored at the shorter endpoint, so equality is
    structural.  Build them through :func:`vertex` and :func:`edge_midpoint`.
    """

    word: Word
    letter: int = 0

    @property
    def is_vertex(self) -> bool:
        return self.letter == 0

    def endpoints(self) -> tuple[Word, Word]:
        if self.is_vertex:
            return (self.word, self.word)
        return (self.word, self.word + (self.letter,))

    def __str__(self) -> str:
        if self.is_vertex:
            return format_word(self.word)
        return f"mid({format_word(self.word)},{format_word((self.letter,))})"


def vertex(w: Word) -> TreePoint:
    return TreePoint(tuple(w), 0)


def edge_midpoint(w: Word, s: int) -> TreePoint:
    w = tuple(w)
    if s == 0:
        raise WordError("edge letter must be nonzero")
    if w and w[-1] == -s:
        return TreePoint(w[:-1], -s)
    return TreePoint(w, s)


def translate(g: Word, p: TreePoint) -> TreePoint:
    """Left translation by the group element ``g``."""
    if p.is_vertex:
        return TreePoint(word_mul(g, p.word), 0)
    return edge_midpoint(word_mul(g, p.word), p.letter)


def dist2(p: TreePoint, q: TreePoint) -> int:
    """Doubled distance in the geometric realisation of the Cayley tree."""
    if p.is_vertex and q.is_vertex:
        return 2 * word_distance(p.word, q.word)
    if p == q:
        return 0
    pe, qe = p.endpoints(), q.endpoints()
    base = min(word_distance(a, b) for a in pe for b in qe)
    # each midpoint endpoint contributes half an edge
    return 2 * base + (0 if p.is_vertex else 1) + (0 if q.is_vertex else 1)


def _vertex_path(u: Word, v: Word) -> list[Word]:
    k = _prefix_len(u, v)
    path = [u[:i] for i in range(len(u), k - 1, -1)]
    path.extend(v[:i] for i in range(k + 1, len(v) + 1))
    return path


def _near_endpoint(p: TreePoint, toward: TreePoint) -> Word:
    a, b = p.endpoints()
    return a if dist2(vertex(a), toward) <= dist2(vertex(b), toward) else b


def geodesic(p: TreePoint, q: TreePoint) -> list[TreePoint]:
    """All tree points on the segment from p to q at half-edge spacing.

    ``geodesic(p, q)[k]`` is the point at doubled distance ``k`` from ``p``.
    """
    if p == q:
        return [p]
    start = p.word if p.is_vertex else _near_endpoint(p, q)
    end = q.word if q.is_vertex else _near_endpoint(q, p)
    verts = _vertex_path(start, end)
    pts: list[TreePoint] = [] if p.is_vertex else [p]
    for i, w in enumerate(verts):
        pts.append(vertex(w))
        if i + 1 < len(verts):
            nxt = verts[i + 1]
            if len(nxt) > len(w):
                pts.append(edge_midpoint(w, nxt[-1]))
            else:
                pts.append(edge_midpoint(nxt, w[-1]))
    if not q.is_vertex:
        pts.append(q)
    assert len(pts) == dist2(p, q) + 1
    return pts


def point_toward(p: TreePoint, q: TreePoint, k: int) -> TreePoint:
    """The point at doubled distance ``k`` from p on the segment pq."""
    path = geodesic(p, q)
    if not 0 <= k < len(path):
        raise PreconditionError(f"position {k} outside segment of doubled length {len(path) - 1}")
    return path[k]


def midpoint(p: TreePoint, q: TreePoint) -> TreePoint:
    d = dist2(p, q)
    if d % 2:
        raise PreconditionError(
            f"midpoint of {p} and {q} falls at a quarter edge (doubled distance {d})"
        )
    return point_toward(p, q, d // 2)


def _check_nonempty(points) -> list[Word]:
    pts = list(points)
    if not pts:
        raise PreconditionError("empty set of words")
    return pts


def diameter2(S: Iterable[Word]) -> tuple[int, tuple[Word, Word]]:
    """Doubled diameter and a diametral pair, by the tree double sweep."""
    pts = _check_nonempty(S)
    p = min(pts, key=word_key)
    q = max(pts, key=lambda w: (word_distance(p, w), _neg_key(w)))
    r = max(pts, key=lambda w: (word_distance(q, w), _neg_key(w)))
    return 2 * word_distance(q, r), (q, r)


def _neg_key(w: Word):
    # ties broken toward the smallest word so results are deterministic
    return (-len(w), tuple(-x for x in w))


def diameter2_bruteforce(S: Iterable[Word]) -> int:
    pts = _check_nonempty(S)
    return max(2 * word_distance(a, b) for a in pts for b in pts)


@dataclass(frozen=True)
class Ball:
    center: TreePoint
    radius2: int

    def contains(self, p: TreePoint) -> bool:
        return dist2(self.center, p) <= self.radius2


def smallest_ball(S: Iterable[Word], check_unique: bool = __debug__) -> Ball:
    pts = _check_nonempty(S)
    d2, (p, q) = diameter2(pts)
    center = midpoint(vertex(p), vertex(q))
    radius2 = d2 // 2
    dists = [dist2(center, vertex(w)) for w in pts]
    assert max(dists) == radius2, "smallest ball does not touch its set"
    if check_unique and len(pts) > 1:
        # on a tree every diametral pair has the same midpoint
        far = [w for w, d in zip(pts, dists) if d == radius2]
        a = far[0]
        for b in far[1:]:
            if word_distance(a, b) * 2 == d2:
                assert midpoint(vertex(a), vertex(b)) == center, "barycenter not unique"
    return Ball(center, radius2)


def ball_budget() -> int:
    env = os.environ.get("GRING_MAX_BALL_VERTICES")
    return int(env) if env else DEFAULT_BALL_BUDGET


def ball_size(rank: int, radius: int) -> int:
    """Number of vertices within ``radius`` edges of a vertex of the 2n-regular tree."""
    if radius < 0:
        return 0
    if rank == 1:
        return 2 * radius + 1
    b = 2 * rank - 1
    return 1 + 2 * rank * (b**radius - 1) // (b - 1)


def neighbours(w: Word, rank: int):
    for i in range(1, rank + 1):
        for s in (i, -i):
            if w and w[-1] == -s:
                yield w[:-1]
            else:
                yield w + (s,)


def ball_vertices(ball: Ball, rank: int, budget: int | None = None) -> list[Word]:
    """All vertices within ``ball``, sorted by :func:`word_key`."""
    check_rank(rank)
    budget = ball_budget() if budget is None else budget
    c, r2 = ball.center, ball.radius2
    if r2 < 0:
        return []
    if c.is_vertex:
        starts, depth = [c.word], r2 // 2
        estimate = ball_size(rank, depth)
    else:
        if r2 < 1:
            return []
        starts, depth = list(c.endpoints()), (r2 - 1) // 2
        estimate = 2 * ball_size(rank, depth)
    if estimate > budget:
        raise BudgetExceeded(
            f"ball of doubled radius {r2} in rank {rank} has ~{estimate} vertices "
            f"(budget {budget}; set GRING_MAX_BALL_VERTICES to raise it)"
        )
    seen = {w: 0 for w in starts}
    queue = deque(starts)
    while queue:
        w = queue.popleft()
        d = seen[w]
        if d == depth:
            continue
        for nb in neighbours(w, rank):
            if nb not in seen:
                seen[nb] = d + 1
                queue.append(nb)
    return sorted(seen, key=word_key)


def translates_within(point: TreePoint, target: TreePoint, bound2: int, rank: int,
                      budget: int | None = None) -> list[Word]:
    """All group elements g with ``dist2(g*point, target) <= bound2``, sorted by :func:`word_key`."""
    if bound2 < 0:
        return []
    anchor = point.word
    # an endpoint of g*point is within bound2 + 1 when point is an edge midpoint
    slack = 0 if point.is_vertex else 1
    verts = ball_vertices(Ball(target, bound2 + slack), rank, budget)
    inv = word_inv(anchor)
    out = []
    for v in verts:
        g = word_mul(v, inv)
        if dist2(translate(g, point), target) <= bound2:
            out.append(g)
    return sorted(out, key=word_key)
