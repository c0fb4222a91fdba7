"""Projector approximations: twist towers, zigzags and the Cooper-Krushkal tower.

Internal twists are built from positive crossings normalized by q^{-1} each,
so every normalized crossing is 𝕀 (q⁰, hdeg 0) -> e_i (q¹, hdeg 1).  In this
form the identity resolution of a twist is a quotient complex, and stage
m+1 of a tower maps onto stage m by projecting onto it.  The kernel of that
projection is the cone of the tower inclusion; all of its objects have
q-shift at least :func:`cone_bound`.

Homology of closures is read in the same grading as the literature tables
(see :data:`khtl.compile.PAPER_NORMALIZATION`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .compile import crossing_complex
from .complexes import (
    INF,
    ChainMap,
    Complex,
    Obj,
    disjoint_union,
    full_closure,
    identity_complex,
    all_flat,
    module_complex,
    shift,
    single_object,
    tensor_v,
)
from .diagrams import format_diagram, identity_diagram, through_degree, turnback, union_circles
from .frobcob import dot_morphism, identity_terms
from .homology import BigradedGroup, format_group, homology
from .simplify import simplify, truncate


class VerificationError(RuntimeError):
    """A computed equality that was expected to hold did not."""


# --- bounds -------------------------------------------------------------------------


def stable_range(n: int, j: int) -> int:
    """Number of fractional twists after which q-degree j of the closure is stable.

    With m₀ = ⌈j/2⌉ = n·k₀ + r₀ (0 ≤ r₀ < n) this is m₀ + min(r₀, n - r₀).
    """
    if n < 1:
        raise ValueError("n must be positive")
    m0 = -((-j) // 2)
    _, r0 = divmod(m0, n)
    return max(0, m0 + min(r0, n - r0))


def cone_bound(n: int, m: int) -> int:
    """Lower bound B_{m+1} on q-shifts in the cone between stages m and m+1."""
    if m < 0:
        raise ValueError("m must be non-negative")
    k, _ = divmod(m, n)
    return m + n * k + 1 - n


@dataclass(frozen=True)
class TurnbackSlide:
    """Result of pulling e_i through m = nk + r fractional twists."""

    i_prime: int
    r_prime: int
    s: int
    q_shift: int         # 6k(n-1) + s
    inner_twists: int    # (n-2)k + r'
    top_crossings: int   # crossings of the slid cap, n-2 only in the halfway case
    q_min: int           # minimal cone shift for this i, taking a_i = i - 1


def turnback_slide(n: int, m: int, i: int) -> TurnbackSlide:
    """Three-case bookkeeping for sliding a turnback through a fractional twist."""
    if not 0 < i < n:
        raise ValueError(f"turnback position {i} out of range for {n} strands")
    if m < 0:
        raise ValueError("m must be non-negative")
    k, r = divmod(m, n)
    if i < n - r:
        rp, s, top = r, 3 * r, 0
    elif i == n - r:
        rp, s, top = r - 1, 3 * r, n - 2
    else:
        rp, s, top = r - 2, 3 * (n + r - 2), 0
    q_min = 2 * n * k - 2 * r - (n - 3) * (r - rp) + top + s + (i - 1) + 1 - n
    return TurnbackSlide((i + r) % n, rp, s, 6 * k * (n - 1) + s, (n - 2) * k + rp, top, q_min)


# --- twist towers ------------------------------------------------------------------


def normalized_twist(n: int) -> Complex:
    """One fractional twist σ_1 ⋯ σ_{n-1}, each crossing shifted by q^{-1}; not simplified."""
    T = identity_complex(n)
    for i in range(1, n):
        T = tensor_v(T, shift(crossing_complex(n, i, 1), -1))
    return T


def _projection(raw: Complex, nd: int, z: int, below: Complex) -> ChainMap:
    """Projection of ``below ⊗ X`` onto ``below ⊗ 𝕀``, where z indexes 𝕀 in X."""
    entries = {}
    for i, o in enumerate(below.objects):
        entries[i * nd + z] = {i: identity_terms(o.loops, len(union_circles(o.tangle, o.tangle)))}
    return ChainMap(raw, below, entries)


@dataclass
class Tower:
    """Stages q^{-C}T_n^m, m = 0..depth, each simplified.

    ``maps[m]`` is the projection from ``raw[m]`` (stage m tensored with one
    more normalized twist, before simplification, so homotopy equivalent to
    stage m+1) onto stage m.  ``stable_meta`` records μ(q) for the q-degrees
    the tower was built for.
    """

    n: int
    stages: List[Tuple[int, Complex]]
    raw: List[Complex] = field(default_factory=list)
    maps: List[ChainMap] = field(default_factory=list)
    stable_meta: Dict[int, int] = field(default_factory=dict)

    def crossings(self, m: int) -> int:
        return m * (self.n - 1)

    def stage(self, m: int) -> Complex:
        return self.stages[m][1]

    def closure_homology(self, m: int, q_window=None) -> BigradedGroup:
        return homology(simplify(full_closure(self.stage(m))), q_window)


def twist_tower(n: int, depth: int, q_max: Optional[int] = None, keep_maps: bool = False,
                q_window: Optional[Tuple[int, int]] = None) -> Tower:
    """Build the twist tower up to ``depth`` fractional twists.

    With ``q_max`` every stage is truncated above q_max + n, enough for
    closures up to q_max; truncated stages carry their window.
    """
    X = normalized_twist(n)
    zs = [j for j, o in enumerate(X.objects) if o.h == 0]
    if len(zs) != 1 or X.objects[zs[0]].tangle != identity_diagram(n):
        raise AssertionError("normalized twist must have a single identity resolution in hdeg 0")
    z, nd = zs[0], len(X.objects)
    S = identity_complex(n)
    tower = Tower(n, [(0, S)])
    for m in range(depth):
        raw = tensor_v(S, X, deloop=False)
        if keep_maps:
            tower.raw.append(raw)
            tower.maps.append(_projection(raw, nd, z, S))
        S = simplify(raw)
        if q_max is not None:
            S = truncate(S, q_max + 2 * n)
        tower.stages.append((m + 1, S))
    if q_window is not None:
        tower.stable_meta = {q: stable_range(n, q) for q in range(q_window[0], q_window[1] + 1)}
    return tower


def stage_homologies(n: int, depth: int, q_max: Optional[int] = None) -> List[BigradedGroup]:
    """Closure homology of every stage 0..depth (restricted to q ≤ q_max when given)."""
    tower = twist_tower(n, depth)
    out = []
    for m in range(depth + 1):
        H = homology(simplify(full_closure(tower.stage(m))))
        out.append(H.restrict(None, q_max))
    return out


def stable_kh(n: int, q_window: Tuple[int, int], safety_extra: int = 1,
              verify: bool = True) -> BigradedGroup:
    """Stable homology of the closed infinite twist in a q-window.

    q-degree j is read from stage μ(j) + safety_extra and, when ``verify``,
    compared against the next stage; a mismatch raises VerificationError.
    """
    q_lo, q_hi = q_window
    if q_lo > q_hi:
        return BigradedGroup()
    need = {q: stable_range(n, q) + safety_extra for q in range(q_lo, q_hi + 1)}
    depth = max(need.values()) + (1 if verify else 0)
    Hs = stage_homologies(n, depth, q_hi)
    entries = {}
    for q, k in need.items():
        row = Hs[k].at_q(q)
        if verify and Hs[k + 1].at_q(q) != row:
            raise VerificationError(
                f"q={q}: stage {k} gives {row}, stage {k + 1} gives {Hs[k + 1].at_q(q)}")
        for i, v in row.items():
            entries[(i, q)] = v
    return BigradedGroup(entries)


# --- zigzag models of P₂ -------------------------------------------------------------


def _dot_pair(sign: int) -> Dict[int, int]:
    """dot on the top arc of e₁ plus ``sign`` times a dot on the bottom arc."""
    e = turnback(2, 1)
    top = dot_morphism(e, 3).terms
    bottom = dot_morphism(e, 1).terms
    out = dict(top)
    for m, c in bottom.items():
        out[m] = out.get(m, 0) + sign * c
    return {m: c for m, c in out.items() if c}


def p2_zigzag(L: int) -> Complex:
    """Truncated P₂: 𝕀₂ → q e₁ → q³ e₁ → ⋯ with L objects.

    The maps are the saddle, then dotT - dotB, dotT + dotB alternating.
    Every missing object has q-shift at least 2L - 1.
    """
    if L < 1:
        raise ValueError("zigzag length must be positive")
    e = turnback(2, 1)
    objs = [Obj(identity_diagram(2), 0, 0)]
    objs += [Obj(e, 2 * t - 1, t) for t in range(1, L)]
    d = {}
    if L > 1:
        d[0] = {1: {0: 1}}
    for t in range(1, L - 1):
        d[t] = {t + 1: _dot_pair(-1 if t % 2 else 1)}
    return Complex(2, 2, objs, d, valid=(-INF, 2 * L - 1))


def p20_zigzag(L: int, dual: bool = True) -> Complex:
    """Truncated P₂,₀: the all-e₁ part of the P₂ zigzag, L objects.

    With ``dual`` (the form used for Hochschild homology) the objects are
    q^{-(2t-1)} e₁ in hdeg -t for t = 1..L, with maps t+1 → t; the kept
    part is a subcomplex and missing objects have q-shift at most -(2L+1).
    Otherwise the objects are q^{2t-1} e₁ in hdeg t with maps t → t+1.
    """
    if L < 1:
        raise ValueError("zigzag length must be positive")
    e = turnback(2, 1)
    d = {}
    if dual:
        objs = [Obj(e, -(2 * t - 1), -t) for t in range(1, L + 1)]
        for t in range(1, L):
            d[t] = {t - 1: _dot_pair(-1 if t % 2 else 1)}
        return Complex(2, 2, objs, d, valid=(-(2 * L + 1), INF))
    objs = [Obj(e, 2 * t - 1, t) for t in range(1, L + 1)]
    for t in range(L - 1):
        d[t] = {t + 1: _dot_pair(1 if t % 2 else -1)}
    return Complex(2, 2, objs, d, valid=(-INF, 2 * L + 1))


# --- Cooper-Krushkal tower -----------------------------------------------------------


def normalized_jm(n: int) -> Complex:
    """Internal Jucys-Murphy braid σ_{n-1} ⋯ σ_1 σ_1 ⋯ σ_{n-1}, normalized by q^{-1} per crossing."""
    letters = list(range(n - 1, 0, -1)) + list(range(1, n))
    J = identity_complex(n)
    for i in letters:
        J = tensor_v(J, shift(crossing_complex(n, i, 1), -1))
    return J


def ck_tower(n: int = 3, depth: int = 2, inner_L: int = 4) -> Tower:
    """Stages q^{-C}·augJM_n^k = (P_{n-1} ⊔ 𝕀₁) ⊗ J_n^k for k = 0..depth.

    P₂ is realized by ``p2_zigzag(inner_L)``; stage windows are inherited
    from that truncation.  ``maps[k]`` projects raw stage k+1 onto stage k.
    """
    if n != 3:
        raise ValueError("the Cooper-Krushkal tower is implemented for n = 3")
    J = normalized_jm(n)
    zs = [j for j, o in enumerate(J.objects) if o.h == 0]
    z, nd = zs[0], len(J.objects)
    S = simplify(disjoint_union(p2_zigzag(inner_L), identity_complex(1)))
    tower = Tower(n, [(0, S)])
    for k in range(depth):
        raw = tensor_v(S, J, deloop=False)
        tower.raw.append(raw)
        tower.maps.append(_projection(raw, nd, z, S))
        S = simplify(raw)
        tower.stages.append((k + 1, S))
    return tower


def associated_graded(tower: Tower, k: int) -> Complex:
    """Kernel of the projection from raw stage k+1 onto stage k, simplified."""
    F = tower.maps[k]
    keep = [i for i in range(len(F.source.objects)) if i not in F.entries]
    src = F.source
    renum = {old: new for new, old in enumerate(keep)}
    d = {}
    for i in keep:
        row = {renum[j]: t for j, t in src.d.get(i, {}).items() if j in renum}
        if row:
            d[renum[i]] = row
    K = Complex(src.bottom, src.top, [src.objects[i] for i in keep], d, check=False, valid=src.valid)
    return simplify(K)


def ck_report(tower: Tower) -> "Report":
    """Check the Cooper-Krushkal tower against its structural properties.

    - the kernel of each projection has only objects of through-degree < n;
    - stage k ⊗ e_{n-1} ≅ q^{(4n-2)k - 2(n-1)k} Σ^{(2n-2)k} stage 0 ⊗ e_{n-1},
      the normalized form of augJM^k ⊗ e_{n-1} ≃ q^{(4n-2)k} Σ^{(2n-2)k} augJM^0 ⊗ e_{n-1};
    - stage k ⊗ e_i is acyclic for i < n - 1.
    Homology comparisons are over all Hom(δ, ·) inside the exact window.
    """
    n = tower.n
    rep = Report(f"Cooper-Krushkal tower on {n} strands, {len(tower.stages) - 1} stages")
    for k in range(len(tower.maps)):
        G = associated_graded(tower, k)
        td = max((through_degree(o.tangle) for o in G.objects), default=0)
        rep.add(f"stage {k}->{k + 1}: associated graded has through-degree < {n}", td < n,
                f"max through-degree {td}")
    last = single_object(turnback(n, n - 1))
    base = simplify(tensor_v(tower.stage(0), last))
    for k in range(1, len(tower.stages)):
        dq = (4 * n - 2) * k - 2 * (n - 1) * k
        dh = (2 * n - 2) * k
        X = simplify(tensor_v(tower.stage(k), last))
        top = min(module_window(X, 10 ** 6), module_window(base, 10 ** 6) + dq)
        lo = -4 * n
        bad = ""
        for delta in all_flat(X):
            got = homology(module_complex(delta, X, (lo, top)))
            want = homology(module_complex(delta, shift(base, dq, dh), (lo, top)))
            if got != want:
                bad = f"Hom({format_diagram(delta)}, -): {_first_difference(got, want)}"
                break
        rep.add(f"stage {k} ⊗ e_{n - 1} ≅ q^{dq}Σ^{dh} stage 0 ⊗ e_{n - 1}", not bad,
                bad or f"q in [{lo}, {top}]")
        for i in range(1, n - 1):
            e = single_object(turnback(n, i))
            for side, Y in (("⊗e", tensor_v(tower.stage(k), e)), ("e⊗", tensor_v(e, tower.stage(k)))):
                top = module_window(Y, 10 ** 6)
                bad2 = first_nonacyclic(simplify(Y), lo, top)
                rep.add(f"stage {k} {side}_{i} acyclic", bad2 is None, bad2 or f"q in [{lo}, {top}]")
    return rep


def ck_projector_window(tower: Tower) -> Tuple[int, int]:
    """q-window in which the top stage of a Cooper-Krushkal tower behaves like P_n.

    stage k ⊗ e_{n-1} is stage 0 ⊗ e_{n-1} pushed up by q^{2nk}, so it
    vanishes below 2nk plus the lowest q carried by stage 0 ⊗ e_{n-1}.
    """
    n = tower.n
    k = len(tower.stages) - 1
    base = simplify(tensor_v(tower.stage(0), single_object(turnback(n, n - 1))))
    top = module_window(base, 10 ** 6)
    low = min((q for delta in all_flat(base)
               for q in homology(module_complex(delta, base, (-10 ** 6, top))).qs()), default=top)
    return (-2 * n, 2 * n * k + low - 1)


# --- projector checks -------------------------------------------------------------------


@dataclass
class Report:
    """Named pass/fail checks with a detail line each."""

    title: str
    checks: List[Tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> List[str]:
        return [f"{name}: {detail}" for name, ok, detail in self.checks if not ok]

    def to_json_obj(self) -> dict:
        return {"title": self.title, "ok": self.ok,
                "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.checks]}

    def text(self) -> str:
        lines = [self.title]
        for name, ok, detail in self.checks:
            lines.append(f"  [{'PASS' if ok else 'FAIL'}] {name}" + (f"  ({detail})" if detail else ""))
        return "\n".join(lines)


def _first_difference(A: BigradedGroup, B: BigradedGroup) -> str:
    keys = sorted(set(A.entries) | set(B.entries), key=lambda k: (k[1], k[0]))
    for key in keys:
        if A[key] != B[key]:
            return f"(i,q)={key}: {A[key]} vs {B[key]}"
    return ""


def module_window(C: Complex, q_hi: int) -> int:
    """Largest q ≤ q_hi at which every Hom(δ, C) agrees with the untruncated complex.

    A labeling of Hom(δ, q^s b) has q-degree at least s - 2n on n strands.
    """
    n = C.bottom
    if C.valid[1] < INF:
        q_hi = min(q_hi, int(C.valid[1]) - 2 * n - 1)
    return q_hi


def closure_window(C: Complex, q_hi: int) -> int:
    if C.valid[1] < INF:
        q_hi = min(q_hi, int(C.valid[1]) - C.bottom - 1)
    return q_hi


def first_nonacyclic(C: Complex, q_lo: int, q_hi: int) -> Optional[str]:
    """None if every Hom(δ, C) is acyclic for q in [q_lo, q_hi], else the first offending bidegree."""
    if q_hi < q_lo:
        return None
    for delta in all_flat(C):
        H = homology(module_complex(delta, C, (q_lo, q_hi)))
        if not H.is_zero():
            (i, q), v = min(H.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            return f"Hom({format_diagram(delta)}, -) nonzero at (i,q)=({i}, {q}): {format_group(*v)}"
    return None


def _closure_h(C: Complex, q_lo: int, q_hi: int) -> BigradedGroup:
    return homology(simplify(full_closure(C)), (q_lo, q_hi))


def verify_projector(C: Complex, q_window: Tuple[int, int], smaller: Optional[Complex] = None,
                     checks: Sequence[str] = ("turnbacks", "idempotent", "crossings", "smaller")) -> Report:
    """Window-restricted projector axioms for a truncated candidate C.

    turnbacks:  C ⊗ e_i and e_i ⊗ C are acyclic (all Hom(δ, ·) complexes);
    idempotent: closure(C ⊗ C) ≅ closure(C);
    crossings:  closure(C ⊗ σ_i) ≅ q·closure(C) for the internal positive
                crossing, and ≅ q²Σ·closure(C) for the unoriented crossing
                Cone(q² 𝕀 → q e_i);
    smaller:    closure(C ⊗ (P_{n-1} ⊔ 𝕀₁)) ≅ closure(C), P_{n-1} = ``smaller``.
    Each comparison is restricted to the q-range where both sides are exact.
    """
    n = C.bottom
    lo, hi = q_window
    rep = Report(f"projector checks on {n} strands, requested q in [{lo}, {hi}]")
    if "turnbacks" in checks:
        for i in range(1, n):
            e = single_object(turnback(n, i))
            for side, X in (("C⊗e", tensor_v(C, e)), ("e⊗C", tensor_v(e, C))):
                top = module_window(X, hi)
                bad = first_nonacyclic(simplify(X), lo, top)
                rep.add(f"kills turnback e_{i} ({side})", bad is None, bad or f"q in [{lo}, {top}]")
    base_top = closure_window(C, hi)
    base = _closure_h(C, lo, base_top)
    if "idempotent" in checks:
        CC = simplify(tensor_v(C, C))
        top = min(base_top, closure_window(CC, hi))
        got = _closure_h(CC, lo, top)
        want = base.restrict(lo, top)
        rep.add("idempotent on closure", got == want, _first_difference(got, want) or f"q in [{lo}, {top}]")
    if "crossings" in checks:
        for i in range(1, n):
            for label, X, dh, dq in (
                    ("positive crossing ≅ q", crossing_complex(n, i, 1), 0, 1),
                    ("unoriented crossing ≅ q²Σ", shift(crossing_complex(n, i, -1), 3, 1), 1, 2)):
                CX = simplify(tensor_v(C, X))
                top = min(closure_window(CX, hi), base_top + dq)
                got = _closure_h(CX, lo, top)
                want = base.shifted(dh, dq).restrict(lo, top)
                rep.add(f"absorbs σ_{i}: {label}", got == want,
                        _first_difference(got, want) or f"q in [{lo}, {top}]")
    if "smaller" in checks and smaller is not None and n >= 2:
        Q = simplify(disjoint_union(smaller, identity_complex(1)))
        CQ = simplify(tensor_v(C, Q))
        top = min(base_top, closure_window(CQ, hi))
        got = _closure_h(CQ, lo, top)
        want = base.restrict(lo, top)
        rep.add("absorbs P_{n-1} ⊔ 𝕀", got == want, _first_difference(got, want) or f"q in [{lo}, {top}]")
    return rep


def p2_window(L: int) -> Tuple[int, int]:
    """Requested q-window for checking p2_zigzag(L); each check trims it further."""
    return (-2, 2 * L - 1)


# --- T(3,∞) tables --------------------------------------------------------------------------


def periodicity_check(q_values: Sequence[int] = (7, 9), period_q: int = 12,
                      period_i: int = 8, safety_extra: int = 1) -> Report:
    """Kh^{i,q}(T(3,∞)) ≅ Kh^{i+8,q+12}(T(3,∞)), group by group, for each q given."""
    qs = sorted(q_values)
    rep = Report(f"periodicity Kh^(i,q) = Kh^(i+{period_i},q+{period_q}) for q in {qs}")
    if not qs:
        return rep
    H = stable_kh(3, (qs[0], qs[-1] + period_q), safety_extra)
    for q in qs:
        if q < 7:
            rep.add(f"q={q}", True, "not asserted below q=7")
            continue
        lo = H.at_q(q)
        up = {i - period_i: v for i, v in H.at_q(q + period_q).items()}
        rep.add(f"q={q} vs q={q + period_q}", lo == up and bool(lo), f"{lo} vs shifted {up}")
    return rep


def cellular_homology(cells: Dict[int, int], boundary: Dict[int, int], cohomology: bool = False,
                      q: int = 0) -> BigradedGroup:
    """Homology of a spectrum with one cell per listed dimension.

    ``cells[k]`` is 1 when there is a k-cell; ``boundary[k]`` is the degree of
    the attaching map from the k-cell onto the (k-1)-cell.  Output entries
    are (dimension, q).
    """
    from .complexes import FreeComplex

    dims = sorted(k for k, c in cells.items() if c)
    idx = {k: j for j, k in enumerate(dims)}
    if cohomology:
        gens = [(k, q) for k in dims]
        d = {idx[k - 1]: {idx[k]: c} for k, c in boundary.items() if c and k - 1 in idx}
        return homology(FreeComplex(gens, d))
    gens = [(-k, q) for k in dims]
    d = {idx[k]: {idx[k - 1]: c} for k, c in boundary.items() if c and k - 1 in idx}
    return homology(FreeComplex(gens, d)).regraded(-1, 0, 0)


def sphere_row(q: int, dims: Sequence[int]) -> BigradedGroup:
    """Homology of a wedge of spheres at q-degree q."""
    return BigradedGroup({(k, q): (1, ()) for k in dims})


def q3_candidates() -> Dict[str, BigradedGroup]:
    """The two tabulated spectra at q = 3, read as homology and as cohomology."""
    # Σ²M(Z/2,2) ∨ S⁴: cells 4, 5 with attaching degree 2, plus a 4-cell
    moore = {"cells": {4: 1, 5: 1}, "boundary": {5: 2}}
    # Σ^{-1} RP⁵/RP²: cells 2, 3, 4 with d_k = 1 + (-1)^k from RP^k
    rp = {"cells": {2: 1, 3: 1, 4: 1}, "boundary": {3: 2, 4: 0}}
    out = {}
    for reading in ("homology", "cohomology"):
        coh = reading == "cohomology"
        m = cellular_homology(moore["cells"], moore["boundary"], coh, 3).plus(sphere_row(3, [4]))
        out[f"wedge-with-Moore table ({reading})"] = m
        out[f"projective-quotient table ({reading})"] = cellular_homology(rp["cells"], rp["boundary"], coh, 3)
    return out


def q3_adjudication(safety_extra: int = 1) -> Tuple[BigradedGroup, Dict[str, bool]]:
    """Compute Kh^{*,3}(T(3,∞)) and say which tabulated spectrum's (co)homology it matches."""
    H = stable_kh(3, (3, 3), safety_extra)
    return H, {name: cand == H for name, cand in q3_candidates().items()}
