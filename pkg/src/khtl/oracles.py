"""Independent reference computations used to cross-check the main engine.

Nothing here touches the cobordism calculus, delooping, elimination or the
sparse SNF.  The cube oracle builds Khovanov's cube of resolutions for a
braid closure from scratch (circles by union-find, merge/split by hand) and
reads off homology with a textbook dense Smith normal form.
"""

from __future__ import annotations

from itertools import product
from math import comb
from typing import Dict, List, Sequence, Tuple


def textbook_snf(M: Sequence[Sequence[int]]) -> List[int]:
    """Smith normal form diagonal d1 | d2 | ... of a dense integer matrix."""
    A = [list(r) for r in M]
    nr = len(A)
    nc = len(A[0]) if nr else 0
    out = []
    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            support = [j for j in range(t, nc) if A[t][j]]
            for i in range(t + 1, nr):
                k = A[i][t] // p
                if k:
                    row = A[i]
                    for j in support:
                        row[j] -= k * A[t][j]
            column = [i for i in range(t, nr) if A[i][t]]
            for j in range(t + 1, nc):
                k = A[t][j] // p
                if k:
                    for i in column:
                        A[i][j] -= k * A[i][t]
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, nr) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, nc) if A[t][j]]
            if rest:
                _, i, j = min(rest)
                A[t], A[i] = A[i], A[t]
                for row in A:
                    row[t], row[j] = row[j], row[t]
                continue
            # divisibility: fold in any entry of the block not divisible by the pivot
            bad = [(i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if A[i][j] % p]
            if not bad:
                break
            i, _ = bad[0]
            for j in range(t, nc):
                A[t][j] += A[i][j]
        out.append(abs(A[t][t]))
        t += 1
    return out


class _UnionFind:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


def _circles(strands: int, letters: Sequence[int], state: Sequence[int]):
    """Circles of the closure in the given resolution, as (count, arc label -> circle).

    Point (l, p) is strand position p just above letter l; level len(letters)
    is glued back to level 0.  Returned labels are the crossing-adjacent
    points (l, i) used to locate the circles touched by each crossing.
    """
    c = len(letters)
    pt = lambda l, p: (l % c if c else 0) * strands + p
    uf = _UnionFind(max(c, 1) * strands)
    for l, x in enumerate(letters):
        i = abs(x) - 1
        positive = x > 0
        # vertical resolution = identity; the other one = turnback
        vertical = (state[l] == 0) if positive else (state[l] == 1)
        for p in range(strands):
            if p in (i, i + 1):
                continue
            uf.union(pt(l, p), pt(l + 1, p))
        if vertical:
            uf.union(pt(l, i), pt(l + 1, i))
            uf.union(pt(l, i + 1), pt(l + 1, i + 1))
        else:
            uf.union(pt(l, i), pt(l, i + 1))
            uf.union(pt(l + 1, i), pt(l + 1, i + 1))
    roots = sorted({uf.find(v) for v in range(max(c, 1) * strands)})
    idx = {r: k for k, r in enumerate(roots)}
    return len(roots), (lambda l, p: idx[uf.find(pt(l, p))])


def cube_homology(strands: int, letters: Sequence[int]):
    """Khovanov homology of a braid closure from the full cube, as {(i, q): (free, torsion)}.

    Gradings follow the compiler: a positive crossing contributes q¹ in
    hdeg 0 (vertical) and q² in hdeg 1; a negative one contributes q⁻² in
    hdeg -1 (turnback) and q⁻¹ in hdeg 0 (vertical).
    """
    c = len(letters)
    neg = sum(1 for x in letters if x < 0)
    gens: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = []
    info = {}
    for state in product((0, 1), repeat=c):
        ncirc, where = _circles(strands, letters, state) if c else (strands, None)
        h = sum(state) - neg
        base = sum((1 + s) if x > 0 else (-2 + s) for x, s in zip(letters, state))
        info[state] = (ncirc, where, h, base)
        for labels in product((0, 1), repeat=ncirc):  # 0 = 1, 1 = X
            gens.append((state, labels))
    grade = {}
    for g in gens:
        ncirc, _, h, base = info[g[0]]
        grade[g] = (h, base + ncirc - 2 * sum(g[1]))
    index = {g: k for k, g in enumerate(gens)}

    def differential(g):
        state, labels = g
        out: Dict[int, int] = {}
        _, where, _, _ = info[state]
        for l in range(c):
            if state[l]:
                continue
            sign = -1 if sum(state[:l]) % 2 else 1
            new = state[:l] + (1,) + state[l + 1:]
            n2, where2, _, _ = info[new]
            i = abs(letters[l]) - 1
            # circles touching the crossing before and after
            before = {where(l, i), where(l, i + 1), where(l + 1, i), where(l + 1, i + 1)}
            after = {where2(l, i), where2(l, i + 1), where2(l + 1, i), where2(l + 1, i + 1)}
            # untouched circles keep labels; match them by a point they pass through
            mapping = {}
            for lev in range(max(c, 1)):
                for p in range(strands):
                    a, b = where(lev, p), where2(lev, p)
                    if a not in before:
                        mapping[a] = b
            for res in _surgery([labels[k] for k in sorted(before)], len(after)):
                lab = [0] * n2
                for a, b in mapping.items():
                    lab[b] = labels[a]
                for k, v in zip(sorted(after), res):
                    lab[k] = v
                tgt = index[(new, tuple(lab))]
                out[tgt] = out.get(tgt, 0) + sign
        return {k: v for k, v in out.items() if v}

    d = {index[g]: differential(g) for g in gens}
    grades = [grade[g] for g in gens]
    by_q: Dict[int, Dict[int, List[int]]] = {}
    for k, (h, q) in enumerate(grades):
        by_q.setdefault(q, {}).setdefault(h, []).append(k)
    result = {}
    for q, by_h in by_q.items():
        ranks, tors = {}, {}
        for h, src in by_h.items():
            tgt = by_h.get(h + 1, [])
            col = {g: k for k, g in enumerate(tgt)}
            M = [[0] * len(tgt) for _ in src]
            for r, g in enumerate(src):
                for t, v in d[g].items():
                    M[r][col[t]] = v
            diag = textbook_snf(M) if src and tgt else []
            ranks[h] = len(diag)
            tors[h + 1] = [x for x in diag if x > 1]
        for h, src in by_h.items():
            free = len(src) - ranks.get(h, 0) - ranks.get(h - 1, 0)
            t = _prime_powers(tors.get(h, []))
            if free or t:
                result[(h, q)] = (free, tuple(sorted(t)))
    return result


def _surgery(labels: List[int], n_after: int) -> List[Tuple[int, ...]]:
    """Merge (two circles -> one) or split (one -> two) on {1, X} labels."""
    if len(labels) == 2 and n_after == 1:
        a, b = labels
        return [] if a and b else [(a | b,)]
    if len(labels) == 1 and n_after == 2:
        return [(1, 1)] if labels[0] else [(0, 1), (1, 0)]
    raise ValueError("a saddle must merge two circles or split one")


def _prime_powers(values: List[int]) -> List[int]:
    out = []
    for n in values:
        p = 2
        while p * p <= n:
            if n % p == 0:
                k = 1
                while n % p == 0:
                    n //= p
                    k *= p
                out.append(k)
            p += 1
        if n > 1:
            out.append(n)
    return out


def state_sum_bracket(strands: int, letters: Sequence[int]) -> Dict[int, int]:
    """Graded Euler characteristic by summing over all resolutions."""
    neg = sum(1 for x in letters if x < 0)
    out: Dict[int, int] = {}
    for state in product((0, 1), repeat=len(letters)):
        ncirc = _circles(strands, letters, state)[0] if letters else strands
        h = sum(state) - neg
        base = sum((1 + s) if x > 0 else (-2 + s) for x, s in zip(letters, state))
        for k in range(ncirc + 1):
            q = base + ncirc - 2 * k
            out[q] = out.get(q, 0) + (-1 if h % 2 else 1) * comb(ncirc, k)
    return {q: v for q, v in sorted(out.items()) if v}
