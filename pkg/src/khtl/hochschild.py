"""Hochschild homology of (2,2)-tangle bimodules over A = H₂ = Z[X]/(X²).

The bimodule of a (2,2)-tangle complex T is M_T = Hom(e₁, T): the bottom arc
of e₁ carries the left A-action and the top arc the right action, both by
precomposing with a dot.  Its A-grading is the Hom q-degree plus one, so
that M_{𝕀} = A with 1 in degree 0 and X in degree -2.

Two independent computations are provided.

* :func:`hh_via_bar` takes the total complex of T with a bar resolution.
  The normalized bar complex M ⊗ Ā^{⊗p} (Ā spanned by X) has differential
  b = r_X + (-1)^p l_X; it is finite in every q-degree and is used for the
  answer.  The full bar complex M ⊗ A^{⊗p}, truncated at length N, is
  computed alongside as a check on the range of degrees where the
  truncation is exact.
* :func:`hh_via_p20` closes T against the P₂,₀ zigzag.

Total degree is i = h - p; HH_p of a module sitting in hdeg 0 appears at
i = -p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

from .compile import TangleWord, mirror_word, tangle_complex
from .complexes import Complex, FreeComplex, INF, full_closure, module_complex, tensor_v
from .diagrams import turnback
from .frobcob import compose_terms, dot_morphism
from .homology import BigradedGroup, homology
from .simplify import simplify

_E1 = turnback(2, 1)
_DOT_LEFT = dot_morphism(_E1, 1).terms   # bottom arc
_DOT_RIGHT = dot_morphism(_E1, 3).terms  # top arc


class HochschildError(RuntimeError):
    """The two Hochschild computations disagree, or a window is out of range."""


# --- the bimodule ------------------------------------------------------------------


@dataclass
class Bimodule:
    """A complex of A-bimodules: generators (h, q_A) with d, and X-actions on each side."""

    gens: List[Tuple[int, int]]
    d: Dict[int, Dict[int, int]]
    left: Dict[int, Dict[int, int]]
    right: Dict[int, Dict[int, int]]

    def h_range(self) -> Tuple[int, int]:
        hs = [h for h, _ in self.gens]
        return (min(hs), max(hs)) if hs else (0, -1)

    def q_range(self) -> Tuple[int, int]:
        qs = [q for _, q in self.gens]
        return (min(qs), max(qs)) if qs else (0, -1)


def bimodule(T: Complex) -> Bimodule:
    """The bimodule complex Hom(e₁, T) of a (2,2) tangle complex."""
    if (T.bottom, T.top) != (2, 2):
        raise ValueError("Hochschild homology is implemented for (2,2)-tangles")
    T = simplify(T)
    F = module_complex(_E1, T)
    index = {lab: k for k, lab in enumerate(F.labels)}

    def action(dot):
        out: Dict[int, Dict[int, int]] = {}
        for k, (x, y, mask) in enumerate(F.labels):
            b = T.objects[y].tangle
            res = compose_terms(_E1, 0, _E1, 0, b, 0, dot, {mask: 1})
            row = {index[(x, y, m)]: c for m, c in res.items() if c}
            if row:
                out[k] = row
        return out

    gens = [(h, q + 1) for h, q in F.gens]
    return Bimodule(gens, F.d, action(_DOT_LEFT), action(_DOT_RIGHT))


def coinvariants(M: Bimodule) -> BigradedGroup:
    """M / (xm - mx) for a bimodule concentrated in one homological degree."""
    hs = {h for h, _ in M.gens}
    if len(hs) > 1:
        raise ValueError("coinvariants are computed for a bimodule in a single degree")
    n = len(M.gens)
    gens = [(-1, q - 2) for _, q in M.gens] + [(0, q) for _, q in M.gens]
    d: Dict[int, Dict[int, int]] = {}
    for g in range(n):
        row: Dict[int, int] = {}
        for g2, c in M.left.get(g, {}).items():
            row[n + g2] = row.get(n + g2, 0) + c
        for g2, c in M.right.get(g, {}).items():
            row[n + g2] = row.get(n + g2, 0) - c
        row = {k: c for k, c in row.items() if c}
        if row:
            d[g] = row
    H = homology(FreeComplex(gens, d))
    h0 = hs.pop() if hs else 0
    return BigradedGroup({(i + h0, q): v for (i, q), v in H.entries.items() if i == 0})


# --- bar complexes -------------------------------------------------------------------


def _total(M: Bimodule, words: Dict[int, List[Tuple[int, ...]]], N: int,
           q_window: Optional[Tuple[int, int]]) -> FreeComplex:
    """Total complex of M ⊗ (words of length p ≤ N), word letters 0 = 1 and 1 = X."""
    gens: List[Tuple[int, int]] = []
    index: Dict[Tuple[int, Tuple[int, ...]], int] = {}
    for p in range(N + 1):
        for w in words[p]:
            wdeg = -2 * sum(w)
            for g, (h, q) in enumerate(M.gens):
                qq = q + wdeg
                if q_window is not None and not q_window[0] <= qq <= q_window[1]:
                    continue
                index[(g, w)] = len(gens)
                gens.append((h - p, qq))
    d: Dict[int, Dict[int, int]] = {}

    def add(row, g, w, c):
        k = index.get((g, w))
        if k is None:
            raise HochschildError("q window is not closed under the bar differential")
        row[k] = row.get(k, 0) + c

    for (g, w), k in index.items():
        h = M.gens[g][0]
        p = len(w)
        row: Dict[int, int] = {}
        for g2, c in M.d.get(g, {}).items():
            add(row, g2, w, c)
        if p:
            sign = -1 if h % 2 else 1
            # m a1 ⊗ a2 ... : right action of a1
            rest = w[1:]
            if w[0]:
                for g2, c in M.right.get(g, {}).items():
                    add(row, g2, rest, sign * c)
            else:
                add(row, g, rest, sign)
            # inner faces a_j a_{j+1}
            for j in range(1, p):
                a, b = w[j - 1], w[j]
                if a and b:
                    continue
                merged = w[:j - 1] + (a | b,) + w[j + 1:]
                add(row, g, merged, sign * (-1) ** j)
            # a_p m ⊗ a1 ... a_{p-1}
            rest = w[:-1]
            last = sign * (-1) ** p
            if w[-1]:
                for g2, c in M.left.get(g, {}).items():
                    add(row, g2, rest, last * c)
            else:
                add(row, g, rest, last)
        row = {j: c for j, c in row.items() if c}
        if row:
            d[k] = row
    return FreeComplex(gens, d)


def normalized_bar(M: Bimodule, N: int, q_window=None) -> FreeComplex:
    """M ⊗ Ā^{⊗p}, p ≤ N: the words are X^p only."""
    return _total(M, {p: [(1,) * p] for p in range(N + 1)}, N, q_window)


def full_bar(M: Bimodule, N: int, q_window=None) -> FreeComplex:
    """M ⊗ A^{⊗p}, p ≤ N, with every word in {1, X}."""
    return _total(M, {p: list(product((0, 1), repeat=p)) for p in range(N + 1)}, N, q_window)


def bar_length(M: Bimodule, q_lo: int) -> int:
    """Length after which the normalized bar has nothing left in q ≥ q_lo."""
    return max(0, (M.q_range()[1] - q_lo) // 2 + 1)


@dataclass
class BarResult:
    groups: BigradedGroup
    full_bar: BigradedGroup
    exact_from: int                  # the full bar agrees with HH for i ≥ exact_from
    stabilized: bool
    disagreements: List[str] = field(default_factory=list)


def hh_via_bar(T, N: Optional[int] = None, q_window: Tuple[int, int] = (-6, 2),
               check: bool = True) -> BarResult:
    """HH_*(A; M_T) on a q-window via the normalized bar complex.

    The full bar complex truncated at N is computed too; it is exact in
    total degrees i ≥ h_max - N + 1, and there the two must agree.  A
    disagreement raises HochschildError.
    """
    M = bimodule(_as_complex(T))
    q_lo, q_hi = q_window
    if q_lo > q_hi:
        return BarResult(BigradedGroup(), BigradedGroup(), 0, True)
    n_exact = bar_length(M, q_lo)
    H = homology(normalized_bar(M, n_exact, q_window))
    Hplus = homology(normalized_bar(M, n_exact + 1, q_window))
    stabilized = H == Hplus
    if N is None:
        N = (q_hi - q_lo) + 2
    hmax = M.h_range()[1]
    exact_from = hmax - N + 1
    full = BigradedGroup()
    bad: List[str] = []
    if check:
        full = homology(full_bar(M, N, q_window))
        for key in sorted(set(full.entries) | set(H.entries)):
            if key[0] >= exact_from and full[key] != H[key]:
                bad.append(f"(i,q)={key}: normalized {H[key]} vs full bar {full[key]}")
        if bad:
            raise HochschildError("bar complexes disagree: " + "; ".join(bad))
    return BarResult(H, full, exact_from, stabilized, bad)


# --- via the P₂,₀ zigzag ---------------------------------------------------------------


def _as_complex(T) -> Complex:
    if isinstance(T, Complex):
        return T
    if isinstance(T, str):
        T = TangleWord.parse(T, 2)
    return tangle_complex(T)


def p20_length(q_lo: int) -> int:
    """Zigzag length whose truncation is invisible for q ≥ q_lo."""
    return max(1, (4 - q_lo) // 2 + 2)


def hh_via_p20(T, q_window: Tuple[int, int] = (-6, 2), L: Optional[int] = None) -> BigradedGroup:
    """HH via the closure of T ⊗ P₂,₀, regraded so that it matches the bar complex.

    Raises HochschildError when the requested window reaches below the
    range where the length-L truncation is exact.
    """
    from .projectors import p20_zigzag

    q_lo, q_hi = q_window
    if q_lo > q_hi:
        return BigradedGroup()
    T = _as_complex(T)
    if L is None:
        # lengthen until the truncation is invisible on the window
        L = p20_length(q_lo)
        C = full_closure(tensor_v(T, p20_zigzag(L, dual=True)))
        while q_lo <= C.valid[0]:
            L += 1
            C = full_closure(tensor_v(T, p20_zigzag(L, dual=True)))
    else:
        C = full_closure(tensor_v(T, p20_zigzag(L, dual=True)))
    if C.valid[0] > -INF and q_lo <= C.valid[0]:
        raise HochschildError(f"window starts at q={q_lo} but P20 of length {L} is exact only above {C.valid[0]}")
    H = homology(simplify(C), q_window)
    return H.regraded(1, 1, 0)


# --- S¹×S² experiment ------------------------------------------------------------------


CLASPED_MERIDIAN = "cup3 2 1 1 2 cap3"
DISJOINT_CIRCLE = "cup3 cap3"
CLASP = "1 1"


@dataclass
class InvarianceReport:
    """Per-q comparison of two HH tables, raw and up to a framing shift.

    A framing shift is (i, q) -> (i + a, q + 3a): the bigrading change of a
    Reidemeister I move, which is the only ambiguity in normalizing HH as
    an invariant of links in S¹×S².
    """

    rows: List[Tuple[int, bool, str, str]]
    framing: Optional[int]
    raw_agree: bool

    @property
    def agree(self) -> bool:
        return self.raw_agree or self.framing is not None

    def to_json_obj(self) -> dict:
        return {"raw_agree": self.raw_agree, "framing_shift": self.framing, "agree": self.agree,
                "rows": [{"q": q, "equal": ok, "first": a, "second": b} for q, ok, a, b in self.rows]}

    def text(self) -> str:
        lines = []
        for q, ok, a, b in self.rows:
            lines.append(f"q={q:>4} {'==' if ok else '!='}  {a or '0'}  |  {b or '0'}")
        if self.raw_agree:
            lines.append("agree with no regrading")
        elif self.framing is not None:
            a = self.framing
            lines.append(f"agree after the framing shift (i, q) -> (i{a:+d}, q{3 * a:+d})")
        else:
            lines.append(f"no framing shift with |a| ≤ {FRAMING_RANGE} makes them agree")
        return "\n".join(lines)


FRAMING_RANGE = 4


def _row(H: BigradedGroup, q: int) -> str:
    from .homology import format_group
    return "  ".join(f"i={i}: {format_group(*v)}" for i, v in H.at_q(q).items())


def s1s2_invariance_report(T1, T2, q_window: Tuple[int, int] = (-8, 2)) -> InvarianceReport:
    """Compare HH of two (2,2)-tangles per q, raw and up to a framing shift."""
    q_lo, q_hi = q_window
    margin = 3 * FRAMING_RANGE
    big = (q_lo - margin, q_hi + margin)
    H1 = hh_via_bar(T1, q_window=big, check=False).groups
    H2 = hh_via_bar(T2, q_window=big, check=False).groups
    rows = []
    for q in range(q_lo, q_hi + 1):
        rows.append((q, H1.at_q(q) == H2.at_q(q), _row(H1, q), _row(H2, q)))
    raw = all(ok for _, ok, _, _ in rows)
    found = None
    target = H2.restrict(q_lo, q_hi)
    if not raw and not target.is_zero():
        for a in sorted(range(-FRAMING_RANGE, FRAMING_RANGE + 1), key=abs):
            if a and H1.shifted(a, 3 * a).restrict(q_lo, q_hi) == target:
                found = a
                break
    return InvarianceReport(rows, found, raw)


def both_chiralities(word: str) -> List[str]:
    w = TangleWord.parse(word, 2)
    return [str(w), str(mirror_word(w))]
