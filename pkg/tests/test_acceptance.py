"""The ten acceptance criteria, one test each.

Every test records a one-line verdict; the lines are printed in the
terminal summary (and by running this file directly).  A criterion that
does not hold is left failing, with the evidence in its verdict line.
"""

import time

import pytest

from khtl.compile import BraidWord, closure_complex, crossing_complex, kauffman_bracket, torus_braid
from khtl.complexes import dot_endomorphism, hom_complex, hom_vector
from khtl.gor import gor_compare
from khtl.hochschild import (
    CLASP,
    CLASPED_MERIDIAN,
    DISJOINT_CIRCLE,
    both_chiralities,
    hh_via_bar,
    hh_via_p20,
    s1s2_invariance_report,
)
from khtl.homology import homology, is_boundary
from khtl.oracles import cube_homology
from khtl.projectors import (
    p2_window,
    p2_zigzag,
    periodicity_check,
    q3_adjudication,
    sphere_row,
    stable_kh,
    stable_range,
    stage_homologies,
    verify_projector,
)

from conftest import CORPUS

RESULTS = {}


def record(number, ok, text):
    line = f"ACCEPTANCE {number:>2}: {'PASS' if ok else 'FAIL'}  {text}"
    RESULTS[number] = line
    print(line)
    return ok


def _as_oracle(H):
    return {k: (f, tuple(sorted(t))) for k, (f, t) in H.entries.items()}


def test_01_oracle_equivalence():
    words = [(name, w) for name, w in CORPUS if w.crossings() <= 8 and w.strands <= 4]
    bad = [name for name, w in words
           if _as_oracle(homology(closure_complex(w))) != cube_homology(w.strands, w.letters)]
    ok = record(1, not bad, f"simplified homology = cube oracle on {len(words) - len(bad)}/{len(words)} "
                            f"corpus braids, torsion included" + (f"; mismatches: {bad}" if bad else ""))
    assert ok


def test_02_decategorification():
    bad = [name for name, w in CORPUS if homology(closure_complex(w)).euler() != kauffman_bracket(w)]
    ok = record(2, not bad, f"χ(Kh) = Kauffman bracket on {len(CORPUS) - len(bad)}/{len(CORPUS)} corpus braids"
                + (f"; mismatches: {bad}" if bad else ""))
    assert ok


def test_03_stabilization_range():
    failures, late = [], []
    for n in (2, 3):
        qs = range(-n, 10)
        depth = max(stable_range(n, q) for q in qs) + 4
        stages = stage_homologies(n, depth, q_max=9)
        for q in qs:
            mu = stable_range(n, q)
            rows = [stages[k].at_q(q) for k in range(mu, mu + 4)]
            if any(r != rows[0] for r in rows):
                failures.append((n, q, mu))
                # where does it actually settle?
                settle = next(k for k in range(mu, depth) if all(
                    stages[j].at_q(q) == stages[k].at_q(q) for j in range(k, depth + 1)))
                late.append(f"n={n} q={q}: μ={mu}, settles at {settle}")
    text = ("Kh^q of the normalized twist closures is constant for k in [μ(q), μ(q)+3], "
            "n=2,3, q in [-n, 9]")
    if failures:
        text += "; not constant at " + "; ".join(late) + \
                " (each is a q with ⌈q/2⌉ divisible by n)"
    ok = record(3, not failures, text)
    assert ok


def test_04_stable_table():
    H = stable_kh(3, (-3, 11))
    rows = {-3: [0], -1: [0], 1: [2], 5: [3, 4], 7: [5, 6], 11: [7, 8]}
    bad = [q for q, dims in rows.items() if H.restrict(q, q) != sphere_row(q, dims)]
    H3, verdict = q3_adjudication()
    matched = [name for name, hit in verdict.items() if hit]
    text = (f"stable Kh(T(3,∞)) matches the sphere rows at q in {sorted(rows)}"
            + (f" except {bad}" if bad else "")
            + f"; q=3 computed as {dict(H3.at_q(3))}, matching: {', '.join(matched) or 'no tabulated reading'}")
    ok = record(4, not bad, text)
    assert ok


def test_05_periodicity():
    rep = periodicity_check((7, 9))
    ok = record(5, rep.ok, "Kh^{i,q} ≅ Kh^{i+8,q+12} for q = 7, 9" +
                ("" if rep.ok else "; " + "; ".join(rep.failures())))
    assert ok


def test_06_projector_axioms():
    notes, ok = [], True
    for L in (4, 6, 8):
        rep = verify_projector(p2_zigzag(L), p2_window(L),
                               checks=("turnbacks", "idempotent", "crossings"))
        ok &= rep.ok
        notes.append(f"L={L} {'ok' if rep.ok else rep.failures()}")
    record(6, ok, "p2_zigzag kills turnbacks, is idempotent on closure and absorbs crossings: " +
           ", ".join(notes))
    assert ok


def test_07_gor_n2():
    rep = gor_compare(2, 12)
    literal = [name for name in rep.matching if "chain homology" in name]
    ok = bool(literal)
    chain = rep.variants["ξ_2..ξ_2, chain homology"]
    text = (f"H(A₂) vs stable Kh(T(2,∞)) on q ≤ 12 under the pinned normalization: "
            f"matching variants {rep.matching or 'none'}")
    if not ok:
        diffs = ", ".join(f"{k}: {a} vs {b}" for k, a, b in chain.rows[:2])
        text += (f"; H(A₂) with ξ₂ agrees on free parts (free agree: {chain.free_agree}) but its "
                 f"2-torsion sits one homological degree low ({diffs}, model vs computed); "
                 f"only the cohomology of the dual A₂^∨ matches exactly")
    record(7, ok, text)
    assert ok


def test_08_hochschild_cross_oracle():
    window = (-8, 1)
    notes, ok = [], True
    for name, word in (("identity", ""), ("e₁-closure", "cap1 cup1"), ("clasp", CLASP)):
        same = hh_via_p20(word, window) == hh_via_bar(word, q_window=window).groups
        ok &= same
        notes.append(f"{name} {'=' if same else '≠'}")
    pair = []
    for word in both_chiralities(CLASPED_MERIDIAN):
        rep = s1s2_invariance_report(word, DISJOINT_CIRCLE)
        ok &= rep.agree
        pair.append(f"{word!r}: raw {'equal' if rep.raw_agree else 'differs'}, "
                    f"framing shift a={rep.framing}")
    control = s1s2_invariance_report("", DISJOINT_CIRCLE)
    ok &= not control.agree
    record(8, ok, f"P20 = bar on q in {window} ({', '.join(notes)}); S¹×S² pair vs unknotted circle: "
                  f"{'; '.join(pair)}; control (identity vs circle) distinguished: {not control.agree}")
    assert ok


def test_09_dot_slide():
    notes, ok = [], True
    for sign in (1, -1):
        C = crossing_complex(2, 1, sign)
        F = hom_complex(C, C)
        d_in, d_out = dot_endomorphism(C, 1), dot_endomorphism(C, 3)
        vanishes = is_boundary(F, hom_vector(F, (1, d_in), (1, d_out)))
        nonzero = not is_boundary(F, hom_vector(F, (1, d_in)))
        ok &= vanishes and nonzero
        notes.append(f"σ^{sign:+d}: [dot_in + dot_out] = 0: {vanishes}, [dot_in] ≠ 0: {nonzero}")
    record(9, ok, "dot slides past a crossing with a sign change in H⁰ Hom: " + "; ".join(notes))
    assert ok


def test_10_performance():
    start = time.perf_counter()
    w = torus_braid(3, 12)
    H = homology(closure_complex(w))
    elapsed = time.perf_counter() - start
    ok = elapsed < 600 and H.euler() == kauffman_bracket(w)
    record(10, ok, f"integral Kh(T(3,12)) in {elapsed:.2f} s (target < 600 s); χ matches the bracket")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
