"""Flat tangles: crossingless matchings of the boundary points of an (m, n) box.

Points are numbered in one cyclic sweep of the boundary: the bottom edge
1..m from left to right, then the top edge m+1..m+n from right to left.
With this numbering a matching is planar exactly when no two of its pairs
interleave, which keeps the noncrossing test uniform for every (m, n).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence


class FlatTangle:
    """A noncrossing perfect matching on the boundary of an (m, n) box.

    The pairs are stored sorted, each as ``(a, b)`` with ``a < b``, so equal
    tangles compare and hash equal.
    """

    __slots__ = ("bottom", "top", "pairs", "partner", "_hash")

    def __init__(self, bottom: int, top: int, pairs: Iterable[Sequence[int]]):
        if bottom < 0 or top < 0 or (bottom + top) % 2:
            raise ValueError(f"invalid boundary ({bottom}, {top})")
        norm = tuple(sorted((min(a, b), max(a, b)) for a, b in pairs))
        size = bottom + top
        partner = [0] * (size + 1)
        for a, b in norm:
            if not (1 <= a < b <= size):
                raise ValueError(f"pair {a}-{b} outside boundary of size {size}")
            if partner[a] or partner[b]:
                raise ValueError(f"point matched twice in {norm}")
            partner[a] = b
            partner[b] = a
        if any(partner[p] == 0 for p in range(1, size + 1)):
            raise ValueError("matching leaves a point unmatched")
        for i, (a, b) in enumerate(norm):
            for c, d in norm[i + 1:]:
                if a < c < b < d or c < a < d < b:
                    raise ValueError(f"pairs {a}-{b} and {c}-{d} cross")
        self.bottom = bottom
        self.top = top
        self.pairs = norm
        self.partner = tuple(partner)
        self._hash = hash((bottom, top, norm))

    @property
    def size(self) -> int:
        return self.bottom + self.top

    def top_point(self, j: int) -> int:
        """Boundary number of the j-th top point counted from the left."""
        return self.bottom + self.top + 1 - j

    def top_position(self, p: int) -> int:
        """Left-to-right position of top point number ``p``."""
        return self.bottom + self.top + 1 - p

    def is_bottom(self, p: int) -> bool:
        return p <= self.bottom

    def __eq__(self, other):
        return (
            isinstance(other, FlatTangle)
            and self._hash == other._hash
            and self.bottom == other.bottom
            and self.top == other.top
            and self.pairs == other.pairs
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "FlatTangle"):
        return (self.bottom, self.top, self.pairs) < (other.bottom, other.top, other.pairs)

    def __repr__(self):
        return f"FlatTangle({self.bottom}, {self.top}, '{format_diagram(self)}')"


def format_diagram(t: FlatTangle) -> str:
    """Text form such as ``"1-4,2-3"``."""
    return ",".join(f"{a}-{b}" for a, b in t.pairs)


def parse_diagram(text: str, bottom: int, top: int) -> FlatTangle:
    """Inverse of :func:`format_diagram`."""
    text = text.strip()
    pairs = []
    if text:
        for chunk in text.split(","):
            a, _, b = chunk.strip().partition("-")
            if not b:
                raise ValueError(f"malformed pair {chunk!r}")
            pairs.append((int(a), int(b)))
    return FlatTangle(bottom, top, pairs)


def identity_diagram(n: int) -> FlatTangle:
    if n < 0:
        raise ValueError("strand count must be non-negative")
    return FlatTangle(n, n, [(i, 2 * n + 1 - i) for i in range(1, n + 1)])


def turnback(n: int, i: int) -> FlatTangle:
    """The TL generator e_i: a cap-cup pair at positions i, i+1."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"turnback index {i} out of range for {n} strands")
    pairs = [(i, i + 1), (2 * n + 1 - i, 2 * n - i)]
    for j in range(1, n + 1):
        if j not in (i, i + 1):
            pairs.append((j, 2 * n + 1 - j))
    return FlatTangle(n, n, pairs)


def cup_diagram(n: int, i: int) -> FlatTangle:
    """(n, n+2) tangle: n vertical strands plus a new arc at top positions i, i+1."""
    if not 1 <= i <= n + 1:
        raise ValueError(f"cup position {i} out of range for {n} strands")
    top_pt = lambda j: 2 * n + 3 - j
    pairs = [(j, top_pt(j if j < i else j + 2)) for j in range(1, n + 1)]
    pairs.append((top_pt(i + 1), top_pt(i)))
    return FlatTangle(n, n + 2, pairs)


def cap_diagram(n: int, i: int) -> FlatTangle:
    """(n+2, n) tangle: a cap joining bottom positions i, i+1; the rest vertical."""
    return mirror_diagram(cup_diagram(n, i))


def through_degree(t: FlatTangle) -> int:
    """Number of strands joining the bottom edge to the top edge."""
    return sum(1 for a, b in t.pairs if a <= t.bottom < b)


def mirror_diagram(t: FlatTangle) -> FlatTangle:
    """Reflect top and bottom; an (m, n) tangle becomes an (n, m) tangle."""
    m, n = t.bottom, t.top

    def move(p):
        if p <= m:  # bottom position p becomes top position p
            return n + m + 1 - p
        return m + n + 1 - p  # top position j becomes bottom position j

    return FlatTangle(n, m, [(move(a), move(b)) for a, b in t.pairs])


def disjoint_union_flat(a: FlatTangle, b: FlatTangle) -> FlatTangle:
    """Place ``a`` to the left of ``b``."""
    m, n = a.bottom + b.bottom, a.top + b.top
    pa, pb = _union_point_maps(a.bottom, a.top, b.bottom, b.top)
    pairs = [(pa[x], pa[y]) for x, y in a.pairs] + [(pb[x], pb[y]) for x, y in b.pairs]
    return FlatTangle(m, n, pairs)


@lru_cache(maxsize=None)
def _union_point_maps(m1: int, n1: int, m2: int, n2: int):
    """Point renumbering of the left and right factors of a disjoint union."""
    m, n = m1 + m2, n1 + n2
    left = [0] * (m1 + n1 + 1)
    right = [0] * (m2 + n2 + 1)
    for i in range(1, m1 + 1):
        left[i] = i
    for j in range(1, n1 + 1):
        left[m1 + n1 + 1 - j] = m + n + 1 - j
    for i in range(1, m2 + 1):
        right[i] = m1 + i
    for j in range(1, n2 + 1):
        right[m2 + n2 + 1 - j] = m + n + 1 - (n1 + j)
    return tuple(left), tuple(right)


def compose_flat(a: FlatTangle, b: FlatTangle) -> tuple[FlatTangle, int]:
    """Stack ``b`` on top of ``a``; return the result and the number of closed circles."""
    if a.top != b.bottom:
        raise ValueError(f"cannot stack a ({a.bottom},{a.top}) tangle under a ({b.bottom},{b.top}) one")
    return _compose_flat(a, b)


@lru_cache(maxsize=None)
def _compose_flat(a: FlatTangle, b: FlatTangle):
    result, loops = compose_with_loops(a, b)
    return result, len(loops)


@lru_cache(maxsize=None)
def compose_with_loops(a: FlatTangle, b: FlatTangle):
    """Stack ``b`` on ``a``; also list each closed circle by its middle positions.

    Middle position k is the k-th point (from the left) where ``a`` meets
    ``b``.  Circles are ordered by their lowest middle position, the order
    used for loop labels everywhere else in the package.
    """
    m, n, p = a.bottom, a.top, b.top
    seen_mid: set[int] = set()
    pairs = []
    done = set()
    for start in range(1, m + p + 1):
        if start in done:
            continue
        if start <= m:
            end = _trace(a, b, 0, start, seen_mid)
        else:
            end = _trace(a, b, 1, n - m + start, seen_mid)
        done.update((start, end))
        pairs.append((start, end))
    loops = []
    for k in range(1, n + 1):
        if k in seen_mid:
            continue
        cyc = []
        cur = k
        while True:
            cyc.append(cur)
            seen_mid.add(cur)
            nxt = b.partner[cur]  # another middle position, through b
            cyc.append(nxt)
            seen_mid.add(nxt)
            cur = m + n + 1 - a.partner[m + n + 1 - nxt]  # back through a
            if cur == k:
                break
        loops.append(tuple(sorted(cyc)))
    loops.sort()
    return FlatTangle(m, p, pairs), tuple(loops)


def _trace(a: FlatTangle, b: FlatTangle, side: int, point: int, seen_mid: set) -> int:
    """Follow an arc of the stacked picture to its other boundary point."""
    m, n = a.bottom, a.top
    while True:
        if side == 0:
            q = a.partner[point]
            if q <= m:
                return q
            point = m + n + 1 - q
            seen_mid.add(point)
            side = 1
        else:
            q = b.partner[point]
            if q > n:
                return m + q - n
            seen_mid.add(q)
            side, point = 0, m + n + 1 - q


def enumerate_flat(bottom: int, top: int) -> list[FlatTangle]:
    """All flat (bottom, top) tangles in canonical order."""
    size = bottom + top
    if size % 2:
        return []
    out = [FlatTangle(bottom, top, pairs) for pairs in _matchings(tuple(range(1, size + 1)))]
    out.sort()
    return out


def _matchings(points: tuple):
    if not points:
        yield []
        return
    first = points[0]
    for idx in range(1, len(points), 2):
        inner = points[1:idx]
        outer = points[idx + 1:]
        for left in _matchings(inner):
            for right in _matchings(outer):
                yield [(first, points[idx])] + left + right


def enumerate_tl(n: int) -> list[FlatTangle]:
    """All (n, n) Temperley-Lieb diagrams; there are Catalan(n) of them."""
    return enumerate_flat(n, n)


@lru_cache(maxsize=None)
def union_circles(a: FlatTangle, b: FlatTangle) -> tuple[tuple[int, ...], ...]:
    """Circles of the closed picture a ∪ b (same boundary), ordered by least point."""
    if (a.bottom, a.top) != (b.bottom, b.top):
        raise ValueError("union of tangles with different boundaries")
    seen = [False] * (a.size + 1)
    circles = []
    for start in range(1, a.size + 1):
        if seen[start]:
            continue
        cyc = [start]
        p = start
        while True:
            p = a.partner[p]
            cyc.append(p)
            p = b.partner[p]
            if p == start:
                break
            cyc.append(p)
        for x in cyc:
            seen[x] = True
        circles.append(tuple(sorted(cyc)))
    circles.sort()
    return tuple(circles)


@lru_cache(maxsize=None)
def circle_index(a: FlatTangle, b: FlatTangle) -> tuple[int, ...]:
    """Map each boundary point to the index of its circle in ``union_circles(a, b)``."""
    idx = [0] * (a.size + 1)
    for c, cyc in enumerate(union_circles(a, b)):
        for p in cyc:
            idx[p] = c
    return tuple(idx)
