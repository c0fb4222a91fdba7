"""Reduction of complexes: delooping and Gaussian elimination.

Elimination cancels differential entries that are ±1 times an identity
labeling between equal tangles with equal shifts.  For such a pivot
α: b -> b', every pair x -> b', b -> y is replaced by
d(x -> y) - d(b -> y) α^{-1} d(x -> b'), and b, b' are dropped.  Pivots are
taken in increasing (hdeg, q, object index) order so results are
reproducible.
"""

from __future__ import annotations

import heapq
from typing import Dict, List, Optional, Tuple

from .complexes import Complex, Obj, deloop_complex, module_complex, all_flat
from .frobcob import Terms, compose_terms


def deloop(C: Complex) -> Complex:
    """Replace objects carrying free loops by loop-free shifted copies."""
    return deloop_complex(C)


def _is_pivot(a: Obj, b: Obj, terms: Terms) -> int:
    """Return ±1 if ``terms`` is a unit multiple of the identity from a to b, else 0."""
    if a.loops or b.loops or a.q != b.q or a.tangle != b.tangle or len(terms) != 1:
        return 0
    c = terms.get(0)
    return c if c in (1, -1) else 0


def gauss_eliminate(C: Complex) -> Complex:
    """Cancel all ±1 identity entries; the result is homotopy equivalent to C."""
    C = deloop_complex(C)
    objs = C.objects
    out: Dict[int, Dict[int, Terms]] = {i: dict(r) for i, r in C.d.items()}
    inc: Dict[int, Dict[int, Terms]] = {}
    for i, row in out.items():
        for j, t in row.items():
            inc.setdefault(j, {})[i] = t
    closed = C.is_closed()
    alive = [True] * len(objs)
    heap: List[Tuple[int, int, int, int]] = []

    def consider(i, j, t):
        a = objs[i]
        if _is_pivot(a, objs[j], t):
            heapq.heappush(heap, (a.h, a.q, i, j))

    for i, row in out.items():
        for j, t in row.items():
            consider(i, j, t)

    while heap:
        _, _, b, b2 = heapq.heappop(heap)
        if not (alive[b] and alive[b2]):
            continue
        alpha = out.get(b, {}).get(b2)
        if alpha is None:
            continue
        u = _is_pivot(objs[b], objs[b2], alpha)
        if not u:
            continue
        sources = [(x, t) for x, t in inc.get(b2, {}).items() if x != b]
        targets = [(y, t) for y, t in out.get(b, {}).items() if y != b2]
        tb = objs[b].tangle
        for x, delta in sources:
            ox = objs[x]
            row = out.setdefault(x, {})
            for y, gamma in targets:
                oy = objs[y]
                if closed:
                    prod = {0: -u * delta[0] * gamma[0]}
                else:
                    prod = compose_terms(ox.tangle, ox.loops, tb, 0, oy.tangle, oy.loops, delta, gamma)
                    prod = {m: -u * c for m, c in prod.items()}
                cur = row.get(y)
                if cur is None:
                    new = {m: c for m, c in prod.items() if c}
                else:
                    new = dict(cur)
                    for m, c in prod.items():
                        v = new.get(m, 0) + c
                        if v:
                            new[m] = v
                        else:
                            new.pop(m, None)
                if new:
                    row[y] = new
                    inc.setdefault(y, {})[x] = new
                    consider(x, y, new)
                else:
                    row.pop(y, None)
                    inc.get(y, {}).pop(x, None)
        for dead in (b, b2):
            alive[dead] = False
            for y in out.pop(dead, {}):
                inc.get(y, {}).pop(dead, None)
            for x in inc.pop(dead, {}):
                out.get(x, {}).pop(dead, None)

    keep = [i for i in range(len(objs)) if alive[i]]
    renum = {old: new for new, old in enumerate(keep)}
    d = {}
    for i in keep:
        row = {renum[j]: t for j, t in out.get(i, {}).items() if t}
        if row:
            d[renum[i]] = row
    return Complex(C.bottom, C.top, [objs[i] for i in keep], d, check=False, valid=C.valid)


def simplify(C: Complex) -> Complex:
    """Deloop and eliminate until no loops and no unit identity entries remain."""
    while True:
        n = len(C.objects)
        C = gauss_eliminate(deloop_complex(C))
        if len(C.objects) == n and not C.has_loops():
            return C


def truncate(C: Complex, q_max: float) -> Complex:
    """Drop objects with q-shift above ``q_max`` and record the new window.

    When every differential entry goes from lower to higher (or equal)
    shift, the dropped objects span a subcomplex, so what remains is a
    quotient complex that agrees with C in q-degrees below the cut.
    """
    keep = [i for i, o in enumerate(C.objects) if o.q - o.loops <= q_max]
    if len(keep) == len(C.objects):
        return C
    for i, row in C.d.items():
        for j in row:
            if C.objects[j].q < C.objects[i].q:
                raise ValueError("differential lowers the shift; truncation is not a quotient")
    renum = {old: new for new, old in enumerate(keep)}
    d = {}
    for i in keep:
        row = {renum[j]: t for j, t in C.d.get(i, {}).items() if j in renum}
        if row:
            d[renum[i]] = row
    dropped_min = min(o.q - o.loops for o in C.objects if o.q - o.loops > q_max)
    hi = min(C.valid[1], dropped_min)
    return Complex(C.bottom, C.top, [C.objects[i] for i in keep], d, check=False,
                   valid=(C.valid[0], hi))


def is_acyclic_in_window(C: Complex, q_lo: int, q_hi: int) -> bool:
    """True iff homology vanishes for every q in [q_lo, q_hi].

    A closed complex is tested directly.  For a tangle complex the test is
    on Hom(δ, C) for every flat tangle δ with the same boundary, graded as
    in :func:`hom_complex`.
    """
    from .homology import homology

    if C.is_closed():
        return homology(C, (q_lo, q_hi)).is_zero()
    for delta in all_flat(C):
        if not homology(module_complex(delta, C, (q_lo, q_hi))).is_zero():
            return False
    return True


def module_homology(C: Complex, q_window: Optional[Tuple[int, int]] = None):
    """Homology of Hom(δ, C) for each flat tangle δ, as a dict δ -> BigradedGroup."""
    from .homology import homology

    return {delta: homology(module_complex(delta, C, q_window)) for delta in all_flat(C)}
