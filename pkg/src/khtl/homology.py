"""Exact bigraded homology over Z (and F_p by universal coefficients).

Matrices are first reduced by sparse elimination on unit entries, choosing
pivots that cause little fill-in; whatever is left is diagonalized densely
by the compiled int64 kernel, with a Python big-integer retry on overflow.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from . import _snf_py
from .complexes import Complex, FreeComplex, closed_to_free

try:  # compiled kernel, selected at import when available
    from ._snf import diagonalize as _diagonalize_fast
    KERNEL = "cython"
except ImportError:  # pragma: no cover - exercised when the extension is absent
    _diagonalize_fast = None
    KERNEL = "python"


def dense_diagonal(rows: List[List[int]]) -> List[int]:
    """Nonzero diagonal of a diagonalization, by the fastest exact kernel."""
    if not rows or not rows[0]:
        return []
    if _diagonalize_fast is not None:
        try:
            return _diagonalize_fast(rows)
        except OverflowError:
            pass
    return _snf_py.diagonalize(rows)


# --- prime powers and invariant factors ---------------------------------------------


def prime_powers(n: int) -> List[int]:
    """Split n > 1 into prime-power factors, e.g. 12 -> [3, 4]."""
    out = []
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
    return sorted(out)


def invariant_factors(diagonal: Iterable[int]) -> List[int]:
    """Rewrite a diagonal as a divisibility chain d1 | d2 | ... (units kept as 1)."""
    diag = [abs(d) for d in diagonal if d]
    by_prime: Dict[int, List[int]] = defaultdict(list)
    for d in diag:
        for pp in prime_powers(d) if d > 1 else ():
            by_prime[_prime_of(pp)].append(pp)
    chain = [1] * len(diag)
    for v in by_prime.values():
        v.sort(reverse=True)
        for idx, pp in enumerate(v):
            chain[len(diag) - 1 - idx] *= pp
    return chain


def _prime_of(pp: int) -> int:
    p = 2
    while pp % p:
        p += 1
    return p


# --- sparse front end -------------------------------------------------------------


def _sparse_reduce(rows: Dict[int, Dict[int, int]]) -> Tuple[int, Dict[int, Dict[int, int]]]:
    """Eliminate unit pivots; return (number eliminated, residual rows)."""
    rows = {r: dict(v) for r, v in rows.items() if v}
    cols: Dict[int, set] = defaultdict(set)
    for r, row in rows.items():
        for c in row:
            cols[c].add(r)
    rank = 0
    progress = True
    while progress:
        progress = False
        for r in sorted(rows, key=lambda x: (len(rows[x]), x)):
            row = rows.get(r)
            if row is None:
                continue
            best = None
            for c, v in row.items():
                if v == 1 or v == -1:
                    cost = len(cols[c])
                    if best is None or cost < best[0] or (cost == best[0] and c < best[1]):
                        best = (cost, c, v)
            if best is None:
                continue
            _, c, u = best
            for r2 in sorted(cols[c] - {r}):
                row2 = rows[r2]
                k = row2[c] * u
                for c2, v in row.items():
                    nv = row2.get(c2, 0) - k * v
                    if nv:
                        if c2 not in row2:
                            cols[c2].add(r2)
                        row2[c2] = nv
                    else:
                        if c2 in row2:
                            del row2[c2]
                            cols[c2].discard(r2)
                if not row2:
                    del rows[r2]
            for c2 in row:
                cols[c2].discard(r)
            del rows[r]
            rank += 1
            progress = True
    return rank, rows


def sparse_diagonal(rows: Dict[int, Dict[int, int]]) -> List[int]:
    """Nonzero diagonal of a diagonalization of a sparse matrix {row: {col: value}}."""
    rank, rest = _sparse_reduce(rows)
    diag = [1] * rank
    if rest:
        rlist = sorted(rest)
        clist = sorted({c for row in rest.values() for c in row})
        cidx = {c: k for k, c in enumerate(clist)}
        dense = []
        for r in rlist:
            line = [0] * len(clist)
            for c, v in rest[r].items():
                line[cidx[c]] = v
            dense.append(line)
        diag.extend(dense_diagonal(dense))
    return diag


def smith_normal_form(M) -> Tuple[List[int], int]:
    """Invariant factors d1 | d2 | ... and the rank of an integer matrix.

    ``M`` may be a list of rows or a sparse mapping {row: {col: value}}.
    """
    if isinstance(M, Mapping):
        rows = {r: {c: v for c, v in row.items() if v} for r, row in M.items()}
    else:
        rows = {r: {c: v for c, v in enumerate(row) if v} for r, row in enumerate(M)}
    diag = sparse_diagonal(rows)
    inv = invariant_factors(diag)
    return inv, len(inv)


def is_boundary(F: FreeComplex, vec: Dict[int, int]) -> bool:
    """True when the homogeneous chain ``vec`` of F is d of an integral chain.

    The image lattice L of d and L' = L + Z·vec have the same rank and the
    same product of invariant factors exactly when vec already lies in L.
    """
    if not vec:
        return True
    degs = {F.gens[k] for k in vec}
    if len(degs) != 1:
        raise ValueError("vector is not homogeneous")
    h, q = degs.pop()
    rows = {k: dict(F.d[k]) for k, g in enumerate(F.gens) if g == (h - 1, q) and F.d.get(k)}
    inv, rank = smith_normal_form(rows) if rows else ([], 0)
    rows[-1] = dict(vec)
    inv2, rank2 = smith_normal_form(rows)
    return rank2 == rank and math.prod(inv2) == math.prod(inv)


# --- bigraded groups ---------------------------------------------------------------


class BigradedGroup:
    """Map (i, q) -> (free rank, sorted prime-power torsion); zero entries omitted."""

    def __init__(self, entries: Optional[Mapping[Tuple[int, int], Tuple[int, Iterable[int]]]] = None):
        self.entries: Dict[Tuple[int, int], Tuple[int, Tuple[int, ...]]] = {}
        for (i, q), (free, tors) in (entries or {}).items():
            tors = tuple(sorted(t for t in tors if t > 1))
            if free or tors:
                self.entries[(int(i), int(q))] = (int(free), tors)

    def __eq__(self, other):
        return isinstance(other, BigradedGroup) and self.entries == other.entries

    def __repr__(self):
        return f"BigradedGroup({dict(sorted(self.entries.items()))})"

    def __getitem__(self, key):
        return self.entries.get(key, (0, ()))

    def is_zero(self) -> bool:
        return not self.entries

    def qs(self) -> List[int]:
        return sorted({q for _, q in self.entries})

    def restrict(self, q_lo=None, q_hi=None) -> "BigradedGroup":
        return BigradedGroup({(i, q): v for (i, q), v in self.entries.items()
                              if (q_lo is None or q >= q_lo) and (q_hi is None or q <= q_hi)})

    def at_q(self, q: int) -> Dict[int, Tuple[int, Tuple[int, ...]]]:
        return {i: v for (i, qq), v in sorted(self.entries.items()) if qq == q}

    def shifted(self, di: int = 0, dq: int = 0) -> "BigradedGroup":
        return BigradedGroup({(i + di, q + dq): v for (i, q), v in self.entries.items()})

    def regraded(self, eps: int, a: int, b: int) -> "BigradedGroup":
        """Apply (i, q) -> (eps*i + a, q + b)."""
        return BigradedGroup({(eps * i + a, q + b): v for (i, q), v in self.entries.items()})

    def merged(self, other: "BigradedGroup") -> "BigradedGroup":
        out = dict(self.entries)
        for k, v in other.entries.items():
            if k in out and out[k] != v:
                raise ValueError(f"conflicting values at {k}")
            out[k] = v
        return BigradedGroup(out)

    def plus(self, other: "BigradedGroup") -> "BigradedGroup":
        """Direct sum, bidegree by bidegree."""
        out = dict(self.entries)
        for k, (free, tors) in other.entries.items():
            f0, t0 = out.get(k, (0, ()))
            out[k] = (f0 + free, tuple(t0) + tuple(tors))
        return BigradedGroup(out)

    def euler(self) -> Dict[int, int]:
        """Graded Euler characteristic as {q: coefficient}."""
        out: Dict[int, int] = defaultdict(int)
        for (i, q), (free, _) in self.entries.items():
            out[q] += free if i % 2 == 0 else -free
        return {q: c for q, c in sorted(out.items()) if c}

    def to_json_obj(self) -> dict:
        out: Dict[str, Dict[str, dict]] = {}
        for (i, q), (free, tors) in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            out.setdefault(str(q), {})[str(i)] = {"free": free, "torsion": list(tors)}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=False)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "BigradedGroup":
        entries = {}
        for q, row in obj.items():
            for i, v in row.items():
                entries[(int(i), int(q))] = (v["free"], v["torsion"])
        return cls(entries)

    def table(self) -> str:
        """Plain-text table: one line per q, groups listed by homological degree."""
        lines = []
        for q in self.qs():
            parts = [f"i={i}: {format_group(*v)}" for i, v in self.at_q(q).items()]
            lines.append(f"q={q:>4}  " + "  ".join(parts))
        return "\n".join(lines)


def format_group(free: int, tors: Iterable[int]) -> str:
    parts = []
    if free:
        parts.append("Z" if free == 1 else f"Z^{free}")
    parts.extend(f"Z/{t}" for t in tors)
    return " + ".join(parts) if parts else "0"


# --- homology of free complexes ---------------------------------------------------


def _blocks(F: FreeComplex):
    by_q: Dict[int, Dict[int, List[int]]] = defaultdict(lambda: defaultdict(list))
    for k, (h, q) in enumerate(F.gens):
        by_q[q][h].append(k)
    return by_q


def _block_homology(F: FreeComplex, by_h: Dict[int, List[int]]):
    ranks: Dict[int, int] = {}
    tors: Dict[int, List[int]] = {}
    for h, gens in by_h.items():
        rows: Dict[int, Dict[int, int]] = {}
        for g in gens:
            row = F.d.get(g)
            if row:
                rows[g] = dict(row)
        diag = sparse_diagonal(rows) if rows else []
        ranks[h] = len(diag)
        tors[h + 1] = [pp for d in diag if d > 1 for pp in prime_powers(d)]
    out = {}
    for h, gens in by_h.items():
        free = len(gens) - ranks.get(h, 0) - ranks.get(h - 1, 0)
        t = tors.get(h, [])
        if free or t:
            out[h] = (free, t)
    return out


def homology(C, q_window: Optional[Tuple[int, int]] = None, threads: int = 1) -> BigradedGroup:
    """Integral homology of a closed Complex or a FreeComplex, per bidegree.

    q-degrees are independent blocks; with threads > 1 they are handed to a
    thread pool.  The result does not depend on the thread count.
    """
    F = closed_to_free(C) if isinstance(C, Complex) else C
    blocks = [(q, by_h) for q, by_h in sorted(_blocks(F).items())
              if q_window is None or q_window[0] <= q <= q_window[1]]
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda b: _block_homology(F, b[1]), blocks))
    else:
        results = [_block_homology(F, by_h) for _, by_h in blocks]
    entries = {}
    for (q, _), res in zip(blocks, results):
        for h, v in res.items():
            entries[(h, q)] = v
    return BigradedGroup(entries)


def poincare(H: BigradedGroup, p: Optional[int] = None) -> Dict[Tuple[int, int], int]:
    """Ranks over Z (p=None) or dimensions over F_p via universal coefficients.

    Returns {(i, q): coefficient of t^i q^q}.
    """
    out: Dict[Tuple[int, int], int] = defaultdict(int)
    for (i, q), (free, tors) in H.entries.items():
        if p is None:
            if free:
                out[(i, q)] += free
            continue
        out[(i, q)] += free
        k = sum(1 for t in tors if t % p == 0)
        if k:
            # a Z/p^e summand in degree i contributes to H^i and to H^{i-1} with F_p coefficients
            out[(i, q)] += k
            out[(i - 1, q)] += k
    return {k: v for k, v in sorted(out.items()) if v}


def homology_mod_p(C, p: int, q_window=None) -> Dict[Tuple[int, int], int]:
    """F_p Betti numbers from the integral answer."""
    return poincare(homology(C, q_window), p)
