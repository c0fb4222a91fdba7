"""Dotted cobordisms between flat tangles, in the Frobenius-label presentation.

A morphism ``a -> b`` between flat tangles with the same boundary is an
integer combination of labelings of the circles of the closed picture
``a ∪ b`` by 1 or X, the algebra being Z[X]/(X^2).  A label records the
disk bounded by that circle, undotted (1) or dotted (X).  Objects may carry
free loops; a loop appears as an extra circle on the source or target side.

Labelings are bit masks.  Bit c is set when circle c carries X.  Circles of
``a ∪ b`` come first, in the order of :func:`union_circles`, then source
loops, then target loops.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable

from .diagrams import (
    FlatTangle,
    compose_with_loops,
    disjoint_union_flat,
    identity_diagram,
    union_circles,
    _union_point_maps,
)

Terms = Dict[int, int]


def popcount(x: int) -> int:
    return bin(x).count("1")


def circle_count(a: FlatTangle, b: FlatTangle, la: int = 0, lb: int = 0) -> int:
    return len(union_circles(a, b)) + la + lb


def labeling_degree(a: FlatTangle, b: FlatTangle, mask: int, la: int = 0, lb: int = 0) -> int:
    """q-degree of a basis labeling; identity maps have degree 0."""
    c = circle_count(a, b, la, lb)
    x = popcount(mask)
    return (c - 2 * x) - (a.bottom + a.top) // 2


def hom_basis(a: FlatTangle, b: FlatTangle, la: int = 0, lb: int = 0) -> list[tuple[int, int]]:
    """All labelings of the circles of ``a ∪ b`` with their q-degrees."""
    if (a.bottom, a.top) != (b.bottom, b.top):
        raise ValueError("hom space between tangles with different boundaries")
    c = circle_count(a, b, la, lb)
    return [(mask, labeling_degree(a, b, mask, la, lb)) for mask in range(1 << c)]


class CobMorphism:
    """An integer combination of labelings; zero coefficients are never stored."""

    __slots__ = ("source", "target", "source_loops", "target_loops", "terms")

    def __init__(self, source: FlatTangle, target: FlatTangle, terms: Terms | None = None,
                 source_loops: int = 0, target_loops: int = 0):
        if (source.bottom, source.top) != (target.bottom, target.top):
            raise ValueError("morphism between tangles with different boundaries")
        self.source = source
        self.target = target
        self.source_loops = source_loops
        self.target_loops = target_loops
        limit = 1 << circle_count(source, target, source_loops, target_loops)
        clean = {}
        for mask, coef in (terms or {}).items():
            if not 0 <= mask < limit:
                raise ValueError(f"labeling {mask} does not fit the gluing")
            if coef:
                clean[mask] = coef
        self.terms = clean

    def degree(self) -> int | None:
        """The common q-degree of all terms; None for the zero morphism."""
        degs = {labeling_degree(self.source, self.target, m, self.source_loops, self.target_loops)
                for m in self.terms}
        if len(degs) > 1:
            raise ValueError("inhomogeneous morphism")
        return degs.pop() if degs else None

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "CobMorphism") -> "CobMorphism":
        self._check_parallel(other)
        return CobMorphism(self.source, self.target, add_terms(self.terms, other.terms),
                           self.source_loops, self.target_loops)

    def __sub__(self, other: "CobMorphism") -> "CobMorphism":
        return self + other.scaled(-1)

    def scaled(self, k: int) -> "CobMorphism":
        return CobMorphism(self.source, self.target, {m: k * c for m, c in self.terms.items()},
                           self.source_loops, self.target_loops)

    def _check_parallel(self, other):
        if (self.source, self.target, self.source_loops, self.target_loops) != (
                other.source, other.target, other.source_loops, other.target_loops):
            raise ValueError("morphisms are not parallel")

    def __eq__(self, other):
        return (isinstance(other, CobMorphism)
                and (self.source, self.target, self.source_loops, self.target_loops, self.terms)
                == (other.source, other.target, other.source_loops, other.target_loops, other.terms))

    def __repr__(self):
        return f"CobMorphism({self.source!r} -> {self.target!r}, {self.terms})"


def add_terms(x: Terms, y: Terms, scale: int = 1) -> Terms:
    out = dict(x)
    for m, c in y.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


# --- the picture engine -------------------------------------------------------
#
# A picture is a 2-regular multigraph whose cycles are the circles being
# labeled.  Each vertex has two slots; adj[v][s] = (w, t) says the edge
# leaving v through slot s enters w through slot t.  A state is a map from
# frozensets of X-labeled cycle representatives to coefficients, where a
# cycle is represented by its least vertex.


class _Picture:
    __slots__ = ("adj", "rep")

    def __init__(self):
        self.adj: dict[int, list] = {}
        self.rep: dict[int, int] = {}

    def add_vertex(self, v, slot0, slot1):
        self.adj[v] = [slot0, slot1]

    def recompute(self):
        rep = {}
        for v in sorted(self.adj):
            if v in rep:
                continue
            cyc = [v]
            w, s = self.adj[v][1]
            while w != v:
                cyc.append(w)
                w, s = self.adj[w][1 - s]
            r = min(cyc)
            for u in cyc:
                rep[u] = r
        self.rep = rep

    def cycles(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, r in self.rep.items():
            out.setdefault(r, []).append(v)
        return out


def _apply_change(state, old_reps, new_reps):
    """Update labels when the cycles ``old_reps`` became ``new_reps``."""
    old_reps = sorted(old_reps)
    new_reps = sorted(new_reps)
    out: dict = {}
    if len(old_reps) == 2 and len(new_reps) == 1:
        r1, r2 = old_reps
        (n,) = new_reps
        for xs, c in state.items():
            k = (r1 in xs) + (r2 in xs)
            if k == 2:
                continue
            base = xs - {r1, r2}
            key = base | {n} if k == 1 else base
            out[key] = out.get(key, 0) + c
    elif len(old_reps) == 1 and len(new_reps) == 2:
        (r,) = old_reps
        n1, n2 = new_reps
        for xs, c in state.items():
            base = xs - {r}
            keys = [base | {n1, n2}] if r in xs else [base | {n1}, base | {n2}]
            for key in keys:
                out[key] = out.get(key, 0) + c
    else:
        raise AssertionError(f"surgery changed {len(old_reps)} circles into {len(new_reps)}")
    return {k: v for k, v in out.items() if v}


def _initial_state(reps_by_circle, mask):
    return {frozenset(r for i, r in enumerate(reps_by_circle) if mask >> i & 1): 1}


# --- composition ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _compose_circles(a: FlatTangle, b: FlatTangle, c: FlatTangle, mf: int, mg: int) -> tuple:
    """Compose basis labelings of circles only (no loops); returns ((mask, coef), ...)."""
    N = a.size
    pic = _Picture()
    for i in range(1, N + 1):
        pic.add_vertex(i, (a.partner[i], 0), (b.partner[i], 1))
        pic.add_vertex(N + i, (N + b.partner[i], 0), (N + c.partner[i], 1))
    pic.recompute()
    fc = union_circles(a, b)
    gc = union_circles(b, c)
    reps = [cyc[0] for cyc in fc] + [N + cyc[0] for cyc in gc]
    state = _initial_state(reps, mf | (mg << len(fc)))
    for i, j in b.pairs:
        old = {pic.rep[i], pic.rep[N + i]}
        pic.adj[i][1] = (N + i, 0)
        pic.adj[N + i][0] = (i, 1)
        pic.adj[j][1] = (N + j, 0)
        pic.adj[N + j][0] = (j, 1)
        pic.recompute()
        new = {pic.rep[i], pic.rep[j]}
        state = _apply_change(state, old, new)
        if not state:
            return ()
    rc = union_circles(a, c)
    index = {pic.rep[cyc[0]]: k for k, cyc in enumerate(rc)}
    if len(index) != len(set(pic.rep.values())):
        raise AssertionError("composite picture has unexpected closed components")
    out = {}
    for xs, coef in state.items():
        mask = 0
        for r in xs:
            mask |= 1 << index[r]
        out[mask] = out.get(mask, 0) + coef
    return tuple(sorted((m, v) for m, v in out.items() if v))


def compose_terms(a: FlatTangle, la: int, b: FlatTangle, lb: int, c: FlatTangle, lc: int,
                  tf: Terms, tg: Terms) -> Terms:
    """Terms of g∘f for f: a⊔la loops -> b⊔lb loops and g: b⊔lb -> c⊔lc."""
    ncf = len(union_circles(a, b))
    ncg = len(union_circles(b, c))
    ncr = len(union_circles(a, c))
    cmask_f = (1 << ncf) - 1
    cmask_g = (1 << ncg) - 1
    out: Terms = {}
    for mf, cf in tf.items():
        f_src = (mf >> ncf) & ((1 << la) - 1)
        f_tgt = mf >> (ncf + la)
        for mg, cg in tg.items():
            g_src = (mg >> ncg) & ((1 << lb) - 1)
            # each middle loop closes into a sphere carrying the product of its two labels
            if lb and (f_tgt ^ g_src) != (1 << lb) - 1:
                continue
            g_tgt = mg >> (ncg + lb)
            loops = (f_src << ncr) | (g_tgt << (ncr + la))
            for m, k in _compose_circles(a, b, c, mf & cmask_f, mg & cmask_g):
                key = m | loops
                v = out.get(key, 0) + cf * cg * k
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return out


def compose(f: CobMorphism, g: CobMorphism) -> CobMorphism:
    """The composite "f then g", a morphism from f.source to g.target."""
    if f.target != g.source or f.target_loops != g.source_loops:
        raise ValueError("composition mismatch")
    terms = compose_terms(f.source, f.source_loops, f.target, f.target_loops,
                          g.target, g.target_loops, f.terms, g.terms)
    return CobMorphism(f.source, g.target, terms, f.source_loops, g.target_loops)


# --- generators ---------------------------------------------------------------------


def identity_terms(loops: int, circles: int) -> Terms:
    """Identity of an object with ``loops`` free loops and ``circles`` tangle circles.

    A loop's identity is the cylinder, written by neck cutting as
    (X on the source disk) + (X on the target disk).
    """
    out = {0: 1}
    for k in range(loops):
        src_bit = 1 << (circles + k)
        tgt_bit = 1 << (circles + loops + k)
        out = {m | bit: c for m, c in out.items() for bit in (src_bit, tgt_bit)}
    return out


def identity_morphism(a: FlatTangle, loops: int = 0) -> CobMorphism:
    return CobMorphism(a, a, identity_terms(loops, len(union_circles(a, a))), loops, loops)


def dot_morphism(a: FlatTangle, point: int) -> CobMorphism:
    """A dot on the strand of ``a`` through boundary point ``point``."""
    if not 1 <= point <= a.size:
        raise ValueError(f"point {point} is not on the boundary")
    circles = union_circles(a, a)
    idx = next(k for k, cyc in enumerate(circles) if point in cyc)
    return CobMorphism(a, a, {1 << idx: 1})


def saddle_morphism(a: FlatTangle, b: FlatTangle) -> CobMorphism:
    """The elementary saddle between tangles differing by one surgery."""
    if len(union_circles(a, b)) != (a.size // 2) - 1:
        raise ValueError("tangles do not differ by a single saddle")
    return CobMorphism(a, b, {0: 1})


_EMPTY = FlatTangle(0, 0, [])


def birth() -> CobMorphism:
    """Cup creating a free loop from the empty diagram."""
    return CobMorphism(_EMPTY, _EMPTY, {0: 1}, 0, 1)


def death() -> CobMorphism:
    """Cap removing a free loop."""
    return CobMorphism(_EMPTY, _EMPTY, {0: 1}, 1, 0)


def elementary(kind: str, source: FlatTangle, target: FlatTangle | None = None,
               point: int | None = None) -> CobMorphism:
    """Generator morphisms by name: identity, dot, saddle, birth, death."""
    if kind == "identity":
        return identity_morphism(source)
    if kind == "dot":
        if point is None:
            raise ValueError("a dot needs a boundary point")
        return dot_morphism(source, point)
    if kind == "saddle":
        if target is None:
            raise ValueError("a saddle needs a target")
        return saddle_morphism(source, target)
    if kind == "birth":
        return birth()
    if kind == "death":
        return death()
    raise ValueError(f"unknown generator {kind!r}")


# --- planar operations on morphisms ------------------------------------------------


@lru_cache(maxsize=None)
def _glue_vertical(lo_s: FlatTangle, lo_t: FlatTangle, lo_mask: int,
                   up_s: FlatTangle, up_t: FlatTangle, up_mask: int) -> tuple:
    """Basis-level f ⊗ g for f: lo_s -> lo_t below and g: up_s -> up_t above.

    Both factors must be loop-free.  The pictures are glued along the middle
    edge one point at a time; each gluing merges two circles or splits one.
    Returns ((mask, coef), ...) in Hom(lo_s∘up_s ⊔ loops, lo_t∘up_t ⊔ loops).
    """
    m, n, p = lo_s.bottom, lo_s.top, up_s.top
    off = m + n
    pic = _Picture()
    for i in range(1, off + 1):
        pic.add_vertex(i, (lo_s.partner[i], 0), (lo_t.partner[i], 1))
    for i in range(1, n + p + 1):
        pic.add_vertex(off + i, (off + up_s.partner[i], 0), (off + up_t.partner[i], 1))
    pic.recompute()
    lc = union_circles(lo_s, lo_t)
    uc = union_circles(up_s, up_t)
    reps = [cyc[0] for cyc in lc] + [off + cyc[0] for cyc in uc]
    state = _initial_state(reps, lo_mask | (up_mask << len(lc)))
    base = off + n + p + 1
    for k in range(1, n + 1):
        u = m + n + 1 - k  # top position k of the lower picture
        u2 = off + k  # bottom position k of the upper picture
        ws, wt = base + 2 * k, base + 2 * k + 1
        old = {pic.rep[u], pic.rep[u2]}
        x, x2 = pic.adj[u]
        y, y2 = pic.adj[u2]
        del pic.adj[u], pic.adj[u2]
        pic.adj[ws] = [x, y]
        pic.adj[wt] = [x2, y2]
        pic.adj[x[0]][x[1]] = (ws, 0)
        pic.adj[y[0]][y[1]] = (ws, 1)
        pic.adj[x2[0]][x2[1]] = (wt, 0)
        pic.adj[y2[0]][y2[1]] = (wt, 1)
        pic.recompute()
        new = {pic.rep[ws], pic.rep[wt]}
        state = _apply_change(state, old, new)
        if not state:
            return ()
    src, src_loops = compose_with_loops(lo_s, up_s)
    tgt, tgt_loops = compose_with_loops(lo_t, up_t)

    def vertex_of(point):
        if point <= m:
            return point
        return off + point - m + n

    rc = union_circles(src, tgt)
    index = {pic.rep[vertex_of(cyc[0])]: k for k, cyc in enumerate(rc)}
    nc = len(rc)
    for j, loop in enumerate(src_loops):
        index[pic.rep[base + 2 * loop[0]]] = nc + j
    for j, loop in enumerate(tgt_loops):
        index[pic.rep[base + 2 * loop[0] + 1]] = nc + len(src_loops) + j
    if len(index) != len(set(pic.rep.values())):
        raise AssertionError("glued picture has unaccounted circles")
    out = {}
    for xs, coef in state.items():
        mask = 0
        for r in xs:
            mask |= 1 << index[r]
        out[mask] = out.get(mask, 0) + coef
    return tuple(sorted((mk, v) for mk, v in out.items() if v))


def tensor_terms_vertical(lo_s, lo_t, lo_terms: Terms, up_s, up_t, up_terms: Terms) -> Terms:
    out: Terms = {}
    for m1, c1 in lo_terms.items():
        for m2, c2 in up_terms.items():
            for mk, k in _glue_vertical(lo_s, lo_t, m1, up_s, up_t, m2):
                v = out.get(mk, 0) + c1 * c2 * k
                if v:
                    out[mk] = v
                else:
                    out.pop(mk, None)
    return out


def tensor_vertical(f: CobMorphism, g: CobMorphism) -> CobMorphism:
    """Stack ``g`` on top of ``f`` (both loop-free)."""
    if f.source_loops or f.target_loops or g.source_loops or g.target_loops:
        raise ValueError("vertical gluing needs loop-free morphisms")
    src, sl = compose_with_loops(f.source, g.source)
    tgt, tl = compose_with_loops(f.target, g.target)
    terms = tensor_terms_vertical(f.source, f.target, f.terms, g.source, g.target, g.terms)
    return CobMorphism(src, tgt, terms, len(sl), len(tl))


@lru_cache(maxsize=None)
def _union_circle_map(a_s, a_t, b_s, b_t):
    """Where the circles of each factor land in the union picture."""
    pa, pb = _union_point_maps(a_s.bottom, a_s.top, b_s.bottom, b_s.top)
    src = disjoint_union_flat(a_s, b_s)
    tgt = disjoint_union_flat(a_t, b_t)
    rc = union_circles(src, tgt)
    where = {}
    for k, cyc in enumerate(rc):
        for pnt in cyc:
            where[pnt] = k
    left = tuple(where[pa[cyc[0]]] for cyc in union_circles(a_s, a_t))
    right = tuple(where[pb[cyc[0]]] for cyc in union_circles(b_s, b_t))
    return left, right


def _remap(mask: int, targets: Iterable[int]) -> int:
    out = 0
    for i, t in enumerate(targets):
        if mask >> i & 1:
            out |= 1 << t
    return out


def union_terms(a_s, a_t, a_terms: Terms, b_s, b_t, b_terms: Terms) -> Terms:
    """Terms of f ⊔ g (f left of g), both loop-free."""
    left, right = _union_circle_map(a_s, a_t, b_s, b_t)
    out: Terms = {}
    for m1, c1 in a_terms.items():
        x = _remap(m1, left)
        for m2, c2 in b_terms.items():
            key = x | _remap(m2, right)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def disjoint_union_morphism(f: CobMorphism, g: CobMorphism) -> CobMorphism:
    if f.source_loops or f.target_loops or g.source_loops or g.target_loops:
        raise ValueError("horizontal union needs loop-free morphisms")
    terms = union_terms(f.source, f.target, f.terms, g.source, g.target, g.terms)
    return CobMorphism(disjoint_union_flat(f.source, g.source),
                       disjoint_union_flat(f.target, g.target), terms)


def empty_identity(n: int) -> CobMorphism:
    return identity_morphism(identity_diagram(n))
