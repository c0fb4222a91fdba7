"""Bounded complexes over the flat-tangle cobordism category.

An object is a flat tangle with a q-shift, a homological degree and a number
of free loops.  The differential raises the homological degree by one and is
stored sparsely: ``d[i][j]`` holds the terms of the entry from object i to
object j.  A morphism f: q^s a -> q^t b has degree zero exactly when every
labeling has q-degree s - t.

Truncated complexes carry a window ``valid = (lo, hi)``.  Every object of the
ideal (untruncated) complex that is missing here has, after delooping,
q-shift at least ``hi`` (or at most ``lo``).  Operations propagate these
bounds, which is how every reported window is derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .diagrams import (
    FlatTangle,
    cap_diagram,
    compose_with_loops,
    cup_diagram,
    disjoint_union_flat,
    enumerate_flat,
    identity_diagram,
    union_circles,
)
from .frobcob import (
    Terms,
    add_terms,
    compose_terms,
    identity_terms,
    labeling_degree,
    tensor_terms_vertical,
    union_terms,
)

INF = math.inf


class Obj(NamedTuple):
    tangle: FlatTangle
    q: int
    h: int
    loops: int = 0


class Complex:
    """A finite complex of shifted flat tangles with a sparse differential."""

    __slots__ = ("bottom", "top", "objects", "d", "valid")

    def __init__(self, bottom: int, top: int, objects: Iterable[Obj],
                 d: Optional[Dict[int, Dict[int, Terms]]] = None, check: bool = True,
                 valid: Tuple[float, float] = (-INF, INF)):
        self.bottom = bottom
        self.top = top
        self.objects: List[Obj] = list(objects)
        self.d: Dict[int, Dict[int, Terms]] = {}
        for i, row in (d or {}).items():
            clean = {j: t for j, t in row.items() if t}
            if clean:
                self.d[i] = clean
        self.valid = valid
        for o in self.objects:
            if (o.tangle.bottom, o.tangle.top) != (bottom, top):
                raise ValueError(f"object {o} does not have boundary ({bottom},{top})")
        if check:
            self.check()

    # --- structure -------------------------------------------------------------

    def __len__(self):
        return len(self.objects)

    def entry(self, i: int, j: int) -> Terms:
        return self.d.get(i, {}).get(j, {})

    def incoming(self) -> Dict[int, Dict[int, Terms]]:
        inc: Dict[int, Dict[int, Terms]] = {}
        for i, row in self.d.items():
            for j, t in row.items():
                inc.setdefault(j, {})[i] = t
        return inc

    def is_closed(self) -> bool:
        return self.bottom == 0 and self.top == 0

    def has_loops(self) -> bool:
        return any(o.loops for o in self.objects)

    def min_shift(self) -> float:
        """Least delooped q-shift of the ideal complex (may be -inf)."""
        if self.valid[0] > -INF:
            return -INF
        present = [o.q - o.loops for o in self.objects]
        return min(present + [self.valid[1]]) if present or self.valid[1] < INF else INF

    def max_shift(self) -> float:
        if self.valid[1] < INF:
            return INF
        present = [o.q + o.loops for o in self.objects]
        return max(present + [self.valid[0]]) if present or self.valid[0] > -INF else -INF

    def check(self):
        """Raise if an entry has the wrong degree or d∘d is nonzero."""
        objs = self.objects
        for i, row in self.d.items():
            a = objs[i]
            for j, terms in row.items():
                b = objs[j]
                if b.h != a.h + 1:
                    raise ValueError(f"differential {i}->{j} does not raise hdeg by one")
                for mask in terms:
                    deg = labeling_degree(a.tangle, b.tangle, mask, a.loops, b.loops)
                    if deg != a.q - b.q:
                        raise ValueError(f"differential {i}->{j} is not of degree zero")
        for i, row in self.d.items():
            acc: Dict[int, Terms] = {}
            a = objs[i]
            for j, t1 in row.items():
                b = objs[j]
                for k, t2 in self.d.get(j, {}).items():
                    c = objs[k]
                    t = compose_terms(a.tangle, a.loops, b.tangle, b.loops, c.tangle, c.loops, t1, t2)
                    acc[k] = add_terms(acc.get(k, {}), t)
            for k, t in acc.items():
                if t:
                    raise ValueError(f"d∘d is nonzero on the entry {i}->{k}")

    def __repr__(self):
        return f"Complex(({self.bottom},{self.top}), {len(self.objects)} objects)"

    def summary(self) -> List[Tuple[int, int, str, int]]:
        from .diagrams import format_diagram
        return [(o.h, o.q, format_diagram(o.tangle), o.loops) for o in self.objects]


@dataclass
class ChainMap:
    """A degree-preserving map of complexes; ``entries[i][j]`` maps source i to target j."""

    source: Complex
    target: Complex
    entries: Dict[int, Dict[int, Terms]]

    def check(self):
        S, T = self.source, self.target
        for i, row in self.entries.items():
            a = S.objects[i]
            for j, terms in row.items():
                b = T.objects[j]
                if a.h != b.h:
                    raise ValueError("chain map entry changes hdeg")
                for mask in terms:
                    if labeling_degree(a.tangle, b.tangle, mask, a.loops, b.loops) != a.q - b.q:
                        raise ValueError("chain map entry is not of degree zero")
        for i, a in enumerate(S.objects):
            acc: Dict[int, Terms] = {}
            for j, f in self.entries.get(i, {}).items():
                b = T.objects[j]
                for k, dt in T.d.get(j, {}).items():
                    c = T.objects[k]
                    acc[k] = add_terms(acc.get(k, {}),
                                       compose_terms(a.tangle, a.loops, b.tangle, b.loops, c.tangle, c.loops, f, dt))
            for j, ds in S.d.get(i, {}).items():
                b = S.objects[j]
                for k, f in self.entries.get(j, {}).items():
                    c = T.objects[k]
                    acc[k] = add_terms(acc.get(k, {}),
                                       compose_terms(a.tangle, a.loops, b.tangle, b.loops, c.tangle, c.loops, ds, f), -1)
            for k, t in acc.items():
                if t:
                    raise ValueError(f"not a chain map at source {i} -> target {k}")


# --- constructors ---------------------------------------------------------------


def single_object(t: FlatTangle, q: int = 0, h: int = 0) -> Complex:
    return Complex(t.bottom, t.top, [Obj(t, q, h)], check=False)


def identity_complex(n: int) -> Complex:
    return single_object(identity_diagram(n))


def shift(C: Complex, q: int = 0, h: int = 0) -> Complex:
    """q^q Σ^h C; Σ raises homological degree."""
    objs = [Obj(o.tangle, o.q + q, o.h + h, o.loops) for o in C.objects]
    return Complex(C.bottom, C.top, objs, C.d, check=False,
                   valid=(C.valid[0] + q, C.valid[1] + q))


def direct_sum(C: Complex, D: Complex) -> Complex:
    if (C.bottom, C.top) != (D.bottom, D.top):
        raise ValueError("direct sum of complexes with different boundaries")
    off = len(C.objects)
    d = {i: dict(r) for i, r in C.d.items()}
    for i, row in D.d.items():
        d[i + off] = {j + off: t for j, t in row.items()}
    return Complex(C.bottom, C.top, C.objects + D.objects, d, check=False,
                   valid=(max(C.valid[0], D.valid[0]), min(C.valid[1], D.valid[1])))


def cone(F: ChainMap, check: bool = True) -> Complex:
    """Cone with the source shifted by Σ^{-1} in hdeg and differential (-d, F, d)."""
    if check:
        F.check()
    S, T = F.source, F.target
    off = len(S.objects)
    objs = [Obj(o.tangle, o.q, o.h - 1, o.loops) for o in S.objects] + list(T.objects)
    d: Dict[int, Dict[int, Terms]] = {}
    for i, row in S.d.items():
        d[i] = {j: {m: -c for m, c in t.items()} for j, t in row.items()}
    for i, row in F.entries.items():
        d.setdefault(i, {}).update({j + off: dict(t) for j, t in row.items()})
    for i, row in T.d.items():
        d[i + off] = {j + off: t for j, t in row.items()}
    return Complex(S.bottom, S.top, objs, d, check=check,
                   valid=(max(S.valid[0], T.valid[0]), min(S.valid[1], T.valid[1])))


def identity_map(C: Complex) -> ChainMap:
    entries = {}
    for i, o in enumerate(C.objects):
        entries[i] = {i: identity_terms(o.loops, len(union_circles(o.tangle, o.tangle)))}
    return ChainMap(C, C, entries)


def zero_map(C: Complex, D: Complex) -> ChainMap:
    return ChainMap(C, D, {})


# --- loops ------------------------------------------------------------------------


def deloop_complex(C: Complex) -> Complex:
    """Replace each object with k free loops by 2^k loop-free copies.

    A loop splits as q^{+1} ⊕ q^{-1}.  The q^{+1} summand includes by the
    undotted cup and projects by the dotted cap; the q^{-1} summand includes
    by the dotted cup and projects by the undotted cap.  An entry between
    two summands keeps the terms whose loop labels pair to a dotted sphere.
    """
    if not C.has_loops():
        return C
    objs: List[Obj] = []
    pieces: Dict[int, List[Tuple[int, int]]] = {}
    for i, o in enumerate(C.objects):
        pieces[i] = []
        for choice in range(1 << o.loops):
            # bit k of choice set means the q^{-1} summand of loop k
            ups = o.loops - bin(choice).count("1")
            pieces[i].append((len(objs), choice))
            objs.append(Obj(o.tangle, o.q + ups - (o.loops - ups), o.h, 0))
    d: Dict[int, Dict[int, Terms]] = {}
    for i, row in C.d.items():
        a = C.objects[i]
        for j, terms in row.items():
            b = C.objects[j]
            nc = len(union_circles(a.tangle, b.tangle))
            la, lb = a.loops, b.loops
            src_mask = ((1 << la) - 1) << nc
            tgt_mask = ((1 << lb) - 1) << (nc + la)
            grouped: Dict[Tuple[int, int], Terms] = {}
            for mask, c in terms.items():
                fs = (mask & src_mask) >> nc
                ft = (mask & tgt_mask) >> (nc + la)
                # source summand q^{+1} needs X on the loop, q^{-1} needs 1
                src_choice = fs ^ ((1 << la) - 1)
                # target summand q^{+1} needs 1, q^{-1} needs X
                tgt_choice = ft
                key = (src_choice, tgt_choice)
                core = mask & ((1 << nc) - 1)
                g = grouped.setdefault(key, {})
                g[core] = g.get(core, 0) + c
            for (sc, tc), t in grouped.items():
                t = {m: c for m, c in t.items() if c}
                if not t:
                    continue
                si = pieces[i][sc][0]
                tj = pieces[j][tc][0]
                d.setdefault(si, {})[tj] = t
    return Complex(C.bottom, C.top, objs, d, check=False, valid=C.valid)


# --- tensor products --------------------------------------------------------------


def tensor_v(C: Complex, D: Complex, deloop: bool = True) -> Complex:
    """Stack D on top of C; Koszul sign (-1)^{hdeg of C} on D's differential."""
    if C.top != D.bottom:
        raise ValueError("vertical tensor of complexes with mismatched boundaries")
    C = deloop_complex(C)
    D = deloop_complex(D)
    nd = len(D.objects)
    objs = []
    for oc in C.objects:
        for od in D.objects:
            t, loops = compose_with_loops(oc.tangle, od.tangle)
            objs.append(Obj(t, oc.q + od.q, oc.h + od.h, len(loops)))
    d: Dict[int, Dict[int, Terms]] = {}
    id_d = {0: 1}
    for i, row in C.d.items():
        a = C.objects[i]
        for i2, t in row.items():
            a2 = C.objects[i2]
            for j, od in enumerate(D.objects):
                b = od.tangle
                terms = tensor_terms_vertical(a.tangle, a2.tangle, t, b, b, id_d)
                if terms:
                    d.setdefault(i * nd + j, {})[i2 * nd + j] = terms
    for j, row in D.d.items():
        b = D.objects[j]
        for j2, t in row.items():
            b2 = D.objects[j2]
            for i, oc in enumerate(C.objects):
                sign = -1 if oc.h % 2 else 1
                a = oc.tangle
                terms = tensor_terms_vertical(a, a, id_d, b.tangle, b2.tangle, t)
                if sign < 0:
                    terms = {m: -c for m, c in terms.items()}
                if terms:
                    d.setdefault(i * nd + j, {})[i * nd + j2] = terms
    # a composite object can close at most middle // 2 loops
    lo, hi = _product_window(C, D)
    middle = C.top
    out = Complex(C.bottom, D.top, objs, d, check=False,
                  valid=(lo + middle // 2, hi - middle // 2))
    return deloop_complex(out) if deloop else out


def _product_window(C: Complex, D: Complex) -> Tuple[float, float]:
    """Window of a product: a missing factor times any object of the other factor."""

    def hi_part(X, Y):
        return INF if X.valid[1] == INF else X.valid[1] + Y.min_shift()

    def lo_part(X, Y):
        return -INF if X.valid[0] == -INF else X.valid[0] + Y.max_shift()

    return max(lo_part(C, D), lo_part(D, C)), min(hi_part(C, D), hi_part(D, C))


def disjoint_union(C: Complex, D: Complex) -> Complex:
    """Place D to the right of C; Koszul sign on D's differential."""
    C = deloop_complex(C)
    D = deloop_complex(D)
    nd = len(D.objects)
    objs = []
    for oc in C.objects:
        for od in D.objects:
            objs.append(Obj(disjoint_union_flat(oc.tangle, od.tangle), oc.q + od.q, oc.h + od.h))
    d: Dict[int, Dict[int, Terms]] = {}
    for i, row in C.d.items():
        a = C.objects[i]
        for i2, t in row.items():
            a2 = C.objects[i2]
            for j, od in enumerate(D.objects):
                terms = union_terms(a.tangle, a2.tangle, t, od.tangle, od.tangle, {0: 1})
                if terms:
                    d.setdefault(i * nd + j, {})[i2 * nd + j] = terms
    for j, row in D.d.items():
        b = D.objects[j]
        for j2, t in row.items():
            b2 = D.objects[j2]
            for i, oc in enumerate(C.objects):
                sign = -1 if oc.h % 2 else 1
                terms = union_terms(oc.tangle, oc.tangle, {0: 1}, b.tangle, b2.tangle, t)
                if terms:
                    d.setdefault(i * nd + j, {})[i * nd + j2] = {m: sign * c for m, c in terms.items()}
    return Complex(C.bottom + D.bottom, C.top + D.top, objs, d, check=False,
                   valid=_product_window(C, D))


def flat_complex(t: FlatTangle) -> Complex:
    return single_object(t)


def partial_trace(C: Complex) -> Complex:
    """Close the rightmost strand of an (n, n) complex into a loop and deloop."""
    n = C.bottom
    if n != C.top or n < 1:
        raise ValueError("partial trace needs an (n,n) complex with n ≥ 1")
    lower = flat_complex(cup_diagram(n - 1, n))
    upper = flat_complex(cap_diagram(n - 1, n))
    widened = disjoint_union(C, identity_complex(1))
    out = tensor_v(tensor_v(lower, widened), upper)
    # closing one strand creates at most one loop per object
    hi = C.valid[1] - 1 if C.valid[1] < INF else INF
    lo = C.valid[0] + 1 if C.valid[0] > -INF else -INF
    out.valid = (lo, hi)
    return out


def full_closure(C: Complex) -> Complex:
    """Close all strands of an (n, n) complex, giving a complex of loop-free empty diagrams."""
    n = C.bottom
    if n != C.top:
        raise ValueError("closure needs an (n,n) complex")
    valid = C.valid
    out = C
    for _ in range(n):
        out = partial_trace(out)
    out.valid = (valid[0] + n if valid[0] > -INF else -INF, valid[1] - n if valid[1] < INF else INF)
    return out


# --- hom complexes ----------------------------------------------------------------


class FreeComplex:
    """A complex of free abelian groups with bigraded generators.

    ``gens[k] = (h, q)``; ``d[k]`` maps a generator to {target: coefficient}.
    """

    def __init__(self, gens: List[Tuple[int, int]], d: Dict[int, Dict[int, int]],
                 labels: Optional[list] = None):
        self.gens = gens
        self.d = d
        self.labels = labels

    def check(self):
        for k, row in self.d.items():
            h, q = self.gens[k]
            for j in row:
                if self.gens[j] != (h + 1, q):
                    raise ValueError("differential does not have bidegree (1, 0)")
        for k, row in self.d.items():
            acc: Dict[int, int] = {}
            for j, c in row.items():
                for l, c2 in self.d.get(j, {}).items():
                    acc[l] = acc.get(l, 0) + c * c2
            if any(acc.values()):
                raise ValueError("d∘d is nonzero")


def closed_to_free(C: Complex) -> FreeComplex:
    """A closed complex with loop-free objects is already a free complex."""
    if not C.is_closed():
        raise ValueError("homology needs a closed complex or a Hom complex")
    C = deloop_complex(C)
    gens = [(o.h, o.q) for o in C.objects]
    d = {}
    for i, row in C.d.items():
        d[i] = {j: t.get(0, 0) for j, t in row.items() if t.get(0, 0)}
    return FreeComplex(gens, d)


def hom_complex(C: Complex, D: Complex, q_window: Optional[Tuple[int, int]] = None) -> FreeComplex:
    """The complex Hom(C, D) with differential f ↦ d∘f - (-1)^{|f|} f∘d.

    A labeling λ of Hom(q^s a, q^t b) sits in bidegree (h_b - h_a, t - s + deg λ);
    so the identity of a complex is a cycle in bidegree (0, 0).  Only
    generators with q inside ``q_window`` are kept (the differential
    preserves q, so this is a direct summand).
    """
    if (C.bottom, C.top) != (D.bottom, D.top):
        raise ValueError("Hom between complexes with different boundaries")
    C = deloop_complex(C)
    D = deloop_complex(D)
    gens: List[Tuple[int, int]] = []
    labels = []
    index: Dict[Tuple[int, int, int], int] = {}
    for x, ox in enumerate(C.objects):
        for y, oy in enumerate(D.objects):
            k = oy.h - ox.h
            for mask in range(1 << len(union_circles(ox.tangle, oy.tangle))):
                q = oy.q - ox.q + labeling_degree(ox.tangle, oy.tangle, mask)
                if q_window is not None and not q_window[0] <= q <= q_window[1]:
                    continue
                index[(x, y, mask)] = len(gens)
                gens.append((k, q))
                labels.append((x, y, mask))
    dC_in = C.incoming()
    d: Dict[int, Dict[int, int]] = {}
    for (x, y, mask), g in index.items():
        ox, oy = C.objects[x], D.objects[y]
        k = oy.h - ox.h
        row: Dict[int, int] = {}
        for y2, t in D.d.get(y, {}).items():
            oy2 = D.objects[y2]
            res = compose_terms(ox.tangle, 0, oy.tangle, 0, oy2.tangle, 0, {mask: 1}, t)
            for m2, c in res.items():
                tgt = index.get((x, y2, m2))
                if tgt is None:
                    raise ValueError("q window is not closed under the differential")
                row[tgt] = row.get(tgt, 0) + c
        sign = -1 if k % 2 else 1
        for x2, t in dC_in.get(x, {}).items():
            ox2 = C.objects[x2]
            res = compose_terms(ox2.tangle, 0, ox.tangle, 0, oy.tangle, 0, t, {mask: 1})
            for m2, c in res.items():
                tgt = index.get((x2, y, m2))
                if tgt is None:
                    raise ValueError("q window is not closed under the differential")
                row[tgt] = row.get(tgt, 0) - sign * c
        row = {j: c for j, c in row.items() if c}
        if row:
            d[g] = row
    return FreeComplex(gens, d, labels)


def dot_endomorphism(C: Complex, point: int) -> ChainMap:
    """A dot on the strand through boundary ``point`` of every object, as a map C -> q²C.

    The dot has q-degree -2, so the shifted target makes it a degree-zero
    chain map; :func:`hom_vector` reads it as an element of Hom(C, C).
    """
    if C.has_loops():
        raise ValueError("deloop the complex before placing dots")
    entries = {}
    for i, o in enumerate(C.objects):
        circles = union_circles(o.tangle, o.tangle)
        idx = next(k for k, cyc in enumerate(circles) if point in cyc)
        entries[i] = {i: {1 << idx: 1}}
    return ChainMap(C, shift(C, 2), entries)


def hom_vector(F: FreeComplex, *maps: Tuple[int, ChainMap]) -> Dict[int, int]:
    """The element sum(c * f) of a Hom complex built by :func:`hom_complex`."""
    index = {lab: k for k, lab in enumerate(F.labels or [])}
    vec: Dict[int, int] = {}
    for coef, f in maps:
        for x, row in f.entries.items():
            for y, terms in row.items():
                for mask, c in terms.items():
                    k = index.get((x, y, mask))
                    if k is None:
                        raise ValueError("map has a component outside the Hom complex window")
                    vec[k] = vec.get(k, 0) + coef * c
    return {k: c for k, c in vec.items() if c}


def module_complex(delta: FlatTangle, C: Complex, q_window=None) -> FreeComplex:
    """Hom(δ, C): the complex of modules over the arc algebra, at the idempotent δ."""
    return hom_complex(single_object(delta), C, q_window)


def all_flat(C: Complex) -> List[FlatTangle]:
    return enumerate_flat(C.bottom, C.top)
