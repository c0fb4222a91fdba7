"""The dga A_n and the module W_n as bigraded ledgers.

A_n is generated by u_1..u_n in bidegree (2i-2, 2i) and exterior classes
ξ_i in bidegree (2i-1, 2i+2), with u_1² = 0 and

    d(u_k) = 0,    d(ξ_m) = Σ_{i=1}^{m} u_i u_{m+1-i}.

The ξ's are odd and anticommute, the u's are even and central, so on a
monomial u^a ξ_{s_1} ⋯ ξ_{s_k} (s increasing)

    d = Σ_j (-1)^{j-1} u^a d(ξ_{s_j}) ξ_{s_1} ⋯ ξ̂_{s_j} ⋯ ξ_{s_k}.

The differential lowers the homological degree.  Homology is taken of this
chain complex; ``dual=True`` takes cohomology of the dual cochain complex
instead, which moves every torsion summand up by one degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .complexes import FreeComplex
from .homology import BigradedGroup, homology

Monomial = Tuple[Tuple[int, ...], Tuple[int, ...]]  # (u exponents a_1..a_n, sorted ξ indices)


@dataclass
class GorAlgebra:
    """A_n truncated to q ≤ q_max.  ``include_xi_n`` adds ξ_n to ξ_2..ξ_{n-1}."""

    n: int
    q_max: int
    include_xi_n: bool = False
    basis: List[Monomial] = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        self.basis = sorted(self._monomials(), key=lambda m: (self.bidegree(m)[1], self.bidegree(m)[0], m))

    @property
    def xi_range(self) -> List[int]:
        top = self.n if self.include_xi_n else self.n - 1
        return list(range(2, top + 1))

    def bidegree(self, m: Monomial) -> Tuple[int, int]:
        a, xs = m
        i = sum(e * (2 * k - 2) for k, e in enumerate(a, 1)) + sum(2 * s - 1 for s in xs)
        q = sum(e * 2 * k for k, e in enumerate(a, 1)) + sum(2 * s + 2 for s in xs)
        return i, q

    def _monomials(self):
        n, Q = self.n, self.q_max
        out = []
        for r in range(len(self.xi_range) + 1):
            for xs in combinations(self.xi_range, r):
                qx = sum(2 * s + 2 for s in xs)
                if qx > Q:
                    continue
                for a in _u_exponents(n, Q - qx):
                    out.append((a, xs))
        return out

    def differential(self, m: Monomial) -> Dict[Monomial, int]:
        a, xs = m
        out: Dict[Monomial, int] = {}
        for j, s in enumerate(xs):
            sign = -1 if j % 2 else 1
            rest = xs[:j] + xs[j + 1:]
            for i in range(1, s + 1):
                b = list(a)
                b[i - 1] += 1
                b[s - i] += 1
                if b[0] > 1:
                    continue
                key = (tuple(b), rest)
                out[key] = out.get(key, 0) + sign
        return {k: v for k, v in out.items() if v}

    def check_d_squared(self):
        for m in self.basis:
            acc: Dict[Monomial, int] = {}
            for m2, c in self.differential(m).items():
                for m3, c2 in self.differential(m2).items():
                    acc[m3] = acc.get(m3, 0) + c * c2
            if any(acc.values()):
                raise AssertionError(f"d² ≠ 0 on {m}")

    def free_complex(self, dual: bool = False) -> FreeComplex:
        """As a FreeComplex (differential raising the first grading).

        Without ``dual`` generators sit at (-i, q) so that the lowering
        differential raises -i; with ``dual`` the transposed differential
        acts on the dual basis at (i, q).
        """
        index = {m: k for k, m in enumerate(self.basis)}
        d: Dict[int, Dict[int, int]] = {}
        for m, k in index.items():
            for m2, c in self.differential(m).items():
                j = index[m2]
                if dual:
                    d.setdefault(j, {})[k] = c
                else:
                    d.setdefault(k, {})[j] = c
        sgn = 1 if dual else -1
        gens = [(sgn * self.bidegree(m)[0], self.bidegree(m)[1]) for m in self.basis]
        return FreeComplex(gens, d, labels=list(self.basis))


def _u_exponents(n: int, budget: int):
    """All exponent vectors (a_1 ≤ 1) with Σ 2k a_k ≤ budget."""
    def rec(k, left):
        if k > n:
            yield ()
            return
        top = left // (2 * k)
        if k == 1:
            top = min(top, 1)
        for e in range(top + 1):
            for rest in rec(k + 1, left - 2 * k * e):
                yield (e,) + rest
    yield from rec(1, budget)


def an_homology(n: int, q_max: int, include_xi_n: bool = False, dual: bool = False,
                check: bool = True) -> BigradedGroup:
    """Homology of A_n for q ≤ q_max, as {(i, q)}; ``dual`` gives the cochain reading."""
    A = GorAlgebra(n, q_max, include_xi_n)
    if check:
        A.check_d_squared()
    H = homology(A.free_complex(dual))
    return H if dual else H.regraded(-1, 0, 0)


# --- W_n ----------------------------------------------------------------------------------


def wn_ranks(n: int, q_max: int) -> BigradedGroup:
    """Bigraded ranks of Z[u_1..u_n]/(u_1²) ⊗ Λ[ξ_2..ξ_n] for q ≤ q_max."""
    A = GorAlgebra(n, q_max, include_xi_n=True)
    counts: Dict[Tuple[int, int], int] = {}
    for m in A.basis:
        key = A.bidegree(m)
        counts[key] = counts.get(key, 0) + 1
    return BigradedGroup({k: (v, ()) for k, v in counts.items()})


def wn_series(n: int, q_max: int) -> Dict[Tuple[int, int], int]:
    """The same ranks by expanding (1 + t⁰q²) Π_{k≥2} 1/(1 - t^{2k-2}q^{2k}) Π (1 + t^{2k-1}q^{2k+2})."""
    series: Dict[Tuple[int, int], int] = {(0, 0): 1}

    def times(poly, factor):
        out: Dict[Tuple[int, int], int] = {}
        for (i, q), c in poly.items():
            for (di, dq), c2 in factor.items():
                if q + dq <= q_max:
                    key = (i + di, q + dq)
                    out[key] = out.get(key, 0) + c * c2
        return out

    series = times(series, {(0, 0): 1, (0, 2): 1})
    for k in range(2, n + 1):
        geo = {(e * (2 * k - 2), e * 2 * k): 1 for e in range(q_max // (2 * k) + 1)}
        series = times(series, geo)
        series = times(series, {(0, 0): 1, (2 * k - 1, 2 * k + 2): 1})
    return {k: v for k, v in sorted(series.items()) if v}


# --- comparison -------------------------------------------------------------------------


@dataclass
class Comparison:
    normalization: Optional[Tuple[int, int, int]]   # (eps, a, b) taking the model side to the computed side
    pinned_qs: List[int]
    agree: bool
    rows: List[Tuple[Tuple[int, int], Tuple, Tuple]]    # (bidegree, model value, computed value) disagreements
    free_agree: bool
    retract_ok: Optional[bool] = None
    retract_failures: List[Tuple[int, int]] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "normalization": None if self.normalization is None else
            dict(zip(("eps", "a", "b"), self.normalization)),
            "pinned_q": self.pinned_qs,
            "agree": self.agree,
            "free_parts_agree": self.free_agree,
            "disagreements": [{"i": k[0], "q": k[1], "model": _fmt(v1), "computed": _fmt(v2)}
                              for k, v1, v2 in self.rows],
            "retract_bound_ok": self.retract_ok,
        }

    def text(self) -> str:
        if self.normalization is None:
            return "no normalization matches the free parts in the lowest q-degrees"
        eps, a, b = self.normalization
        sign = "" if eps > 0 else "-"
        lines = [f"normalization (i, q) -> ({sign}i{a:+d}, q{b:+d}), pinned on q = {self.pinned_qs}",
                 f"free parts agree: {self.free_agree}",
                 f"exact agreement including torsion: {self.agree}"]
        for k, v1, v2 in self.rows:
            lines.append(f"  (i,q)={k}: model {_fmt(v1)} vs computed {_fmt(v2)}")
        if self.retract_ok is not None:
            lines.append(f"retract bound rank Kh ≤ rank W_n: {self.retract_ok}")
        return "\n".join(lines)


def _fmt(v) -> str:
    from .homology import format_group
    return format_group(*v)


def _free(H: BigradedGroup) -> Dict[Tuple[int, int], int]:
    return {k: f for k, (f, _) in H.entries.items() if f}


def compare_stable(model: BigradedGroup, computed: BigradedGroup, q_window: Tuple[int, int],
                   wn: Optional[BigradedGroup] = None, span: int = 12) -> Comparison:
    """Pin an affine regrading on free parts, then compare exactly on the window.

    The regrading (i, q) -> (eps*i + a, q + b) is the first (eps = 1 first,
    then by |a| + |b|) whose image of ``model`` has the same free parts as
    ``computed`` in the three lowest populated q-degrees of ``computed``.
    With ``wn`` the retract bound rank_Q Kh^{i,q} ≤ rank W_n at the
    preimage bidegree is checked as well.
    """
    q_lo, q_hi = q_window
    comp = computed.restrict(q_lo, q_hi)
    pinned = comp.qs()[:3]
    cands = sorted(((eps, a, b) for eps in (1, -1) for a in range(-span, span + 1)
                    for b in range(-span, span + 1)),
                   key=lambda t: (t[0] < 0, abs(t[1]) + abs(t[2]), t))
    chosen = None
    for eps, a, b in cands:
        img = model.regraded(eps, a, b)
        if all(_free(img.restrict(q, q)) == _free(comp.restrict(q, q)) for q in pinned):
            chosen = (eps, a, b)
            break
    if chosen is None:
        return Comparison(None, pinned, False, [], False)
    img = model.regraded(*chosen).restrict(q_lo, q_hi)
    rows = []
    for key in sorted(set(img.entries) | set(comp.entries), key=lambda k: (k[1], k[0])):
        if img[key] != comp[key]:
            rows.append((key, img[key], comp[key]))
    free_ok = _free(img) == _free(comp)
    result = Comparison(chosen, pinned, not rows, rows, free_ok)
    if wn is not None:
        eps, a, b = chosen
        fails = []
        for (i, q), (f, _) in comp.entries.items():
            pre = (eps * (i - a), q - b)
            if f > wn[pre][0]:
                fails.append((i, q))
        result.retract_ok = not fails
        result.retract_failures = sorted(fails)
    return result


@dataclass
class GorReport:
    n: int
    q_max: int
    variants: Dict[str, Comparison]
    matching: List[str]

    def text(self) -> str:
        lines = [f"GOR comparison for n = {self.n}, q ≤ {self.q_max}"]
        for name, c in self.variants.items():
            lines.append(f"-- {name}")
            lines.extend("   " + l for l in c.text().splitlines())
        lines.append("matching variants: " + (", ".join(self.matching) or "none"))
        return "\n".join(lines)

    def to_json_obj(self) -> dict:
        return {"n": self.n, "q_max": self.q_max, "matching": self.matching,
                "variants": {k: v.to_json_obj() for k, v in self.variants.items()}}


def variant_name(include_xi_n: bool, dual: bool, n: int) -> str:
    xi = f"ξ_2..ξ_{n}" if include_xi_n else f"ξ_2..ξ_{n - 1}"
    return f"{xi}, {'cochain dual' if dual else 'chain homology'}"


def gor_compare(n: int, q_max: int, stable: Optional[BigradedGroup] = None,
                variants=((False, False), (True, False), (False, True), (True, True))) -> GorReport:
    """Compare H(A_n) against stable Kh(T(n,∞)) for both ξ-ranges and both readings."""
    from .projectors import stable_kh

    q_lo = -n
    if stable is None:
        stable = stable_kh(n, (q_lo, q_max))
    # the model is shifted down in q by the normalization, so build it a bit higher
    wn = wn_ranks(n, q_max + 2 * n)
    out: Dict[str, Comparison] = {}
    for include, dual in variants:
        H = an_homology(n, q_max + 2 * n, include, dual)
        out[variant_name(include, dual, n)] = compare_stable(H, stable, (q_lo, q_max), wn)
    matching = [k for k, c in out.items() if c.agree]
    return GorReport(n, q_max, out, matching)
