import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from khtl import _snf_py
from khtl import homology as hmod
from khtl.compile import BraidWord, closure_complex
from khtl.complexes import FreeComplex
from khtl.homology import (
    BigradedGroup,
    homology,
    homology_mod_p,
    invariant_factors,
    is_boundary,
    poincare,
    prime_powers,
    smith_normal_form,
)
from khtl.oracles import textbook_snf

matrices = st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


def chain(diag):
    return invariant_factors(diag)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_matches_textbook(M):
    inv, rank = smith_normal_form(M)
    ref = chain(textbook_snf(M))
    assert (inv, rank) == (ref, len(ref))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_kernels_agree(M):
    py = chain(_snf_py.diagonalize([list(r) for r in M]))
    if hmod._diagonalize_fast is not None:
        assert chain(hmod._diagonalize_fast([list(r) for r in M])) == py
    assert chain(hmod.dense_diagonal([list(r) for r in M])) == py


def test_overflow_falls_back_to_big_integers():
    big = 2 ** 40
    M = [[big, big + 1], [big - 1, big]]
    assert smith_normal_form(M) == ([1, 1], 2)
    M = [[2 ** 62, 0], [0, 3 ** 39]]
    inv, rank = smith_normal_form(M)
    assert rank == 2 and inv[-1] == 2 ** 62 * 3 ** 39


def test_sparse_input():
    assert smith_normal_form({0: {0: 2, 5: 4}, 3: {0: 6}}) == ([2, 12], 2)


def test_prime_powers_and_invariant_factors():
    assert prime_powers(12) == [3, 4]
    assert invariant_factors([2, 3, 4]) == [1, 2, 12]


def test_unknot_and_trefoil():
    assert homology(closure_complex(BraidWord.parse("1", 2))) == \
        BigradedGroup({(0, -1): (1, ()), (0, 1): (1, ())})
    H = homology(closure_complex(BraidWord.parse("1 1 1", 2)))
    assert H[(3, 7)] == (0, (2,)) and H[(3, 9)] == (1, ())


def test_threads_do_not_change_the_answer():
    C = closure_complex(BraidWord.parse("1 2 1 2 1 2 1 2", 3))
    assert homology(C, threads=4) == homology(C)


def test_poincare_and_mod_p():
    H = homology(closure_complex(BraidWord.parse("1 1 1", 2)))
    P2 = poincare(H, 2)
    assert P2[(2, 7)] == 1 and P2[(3, 7)] == 1 and P2[(3, 9)] == 1
    assert poincare(H, 3).get((2, 7), 0) == 0
    assert homology_mod_p(closure_complex(BraidWord.parse("1 1 1", 2)), 2) == P2


def _mod_p_direct(F, p):
    """F_p Betti numbers by Gaussian elimination mod p, independent of the integral path."""
    out = {}
    by_deg = {}
    for k, g in enumerate(F.gens):
        by_deg.setdefault(g, []).append(k)

    def rank_mod_p(src, tgt):
        col = {t: j for j, t in enumerate(tgt)}
        rows = [[0] * len(tgt) for _ in src]
        for r, g in enumerate(src):
            for t, c in F.d.get(g, {}).items():
                rows[r][col[t]] = c % p
        rank, m = 0, rows
        for j in range(len(tgt)):
            piv = next((i for i in range(rank, len(m)) if m[i][j]), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            inv = pow(m[rank][j], -1, p)
            for i in range(len(m)):
                if i != rank and m[i][j]:
                    f = m[i][j] * inv % p
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
            rank += 1
        return rank

    for (h, q), gens in by_deg.items():
        out_rank = rank_mod_p(gens, by_deg.get((h + 1, q), []))
        in_rank = rank_mod_p(by_deg.get((h - 1, q), []), gens)
        dim = len(gens) - out_rank - in_rank
        if dim:
            out[(h, q)] = dim
    return out


@pytest.mark.parametrize("word,strands", [("1 1 1", 2), ("1 2 1 2 1 2 1 2", 3), ("1 -2 1 -2 1 -2", 3)])
@pytest.mark.parametrize("p", [2, 3])
def test_universal_coefficients(word, strands, p):
    from khtl.complexes import closed_to_free

    C = closure_complex(BraidWord.parse(word, strands))
    assert homology_mod_p(C, p) == _mod_p_direct(closed_to_free(C), p)


def test_json_round_trip():
    H = homology(closure_complex(BraidWord.parse("1 2 1 2 1 2 1 2", 3)))
    text = H.to_json()
    assert BigradedGroup.from_json_obj(json.loads(text)) == H
    assert H.to_json() == text


def test_group_arithmetic():
    A = BigradedGroup({(0, 0): (1, ())})
    B = BigradedGroup({(0, 0): (0, (2,)), (1, 2): (1, ())})
    S = A.plus(B)
    assert S[(0, 0)] == (1, (2,)) and S[(1, 2)] == (1, ())
    assert S.shifted(1, 2)[(2, 4)] == (1, ())
    assert S.restrict(1, 3) == BigradedGroup({(1, 2): (1, ())})
    assert S.regraded(-1, 0, 0)[(-1, 2)] == (1, ())


def test_is_boundary_on_random_boundaries():
    rng = random.Random(7)
    # a random complex Z^3 -> Z^4 -> Z^2 with d∘d = 0 built from a factorization
    A = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(3)]
    gens = [(0, 0)] * 3 + [(1, 0)] * 4
    d = {i: {3 + j: A[i][j] for j in range(4) if A[i][j]} for i in range(3)}
    F = FreeComplex(gens, d)
    x = [rng.randint(-2, 2) for _ in range(3)]
    v = {}
    for i, c in enumerate(x):
        for j, a in d.get(i, {}).items():
            v[j] = v.get(j, 0) + c * a
    assert is_boundary(F, {k: c for k, c in v.items() if c})
    doubled = {1: 1}
    F2 = FreeComplex([(0, 0), (1, 0)], {0: {1: 2}})
    assert not is_boundary(F2, doubled) and is_boundary(F2, {1: 4})


def test_pure_python_fallback_is_selected_without_the_extension():
    import subprocess
    import sys

    code = ("import sys; sys.modules['khtl._snf'] = None\n"
            "import khtl.homology as h\n"
            "from khtl.compile import BraidWord, closure_complex\n"
            "H = h.homology(closure_complex(BraidWord.parse('1 2 1 2 1 2 1 2', 3)))\n"
            "print(h.KERNEL, H.to_json())")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    kernel, payload = proc.stdout.split(" ", 1)
    assert kernel == "python"
    H = homology(closure_complex(BraidWord.parse("1 2 1 2 1 2 1 2", 3)))
    assert BigradedGroup.from_json_obj(json.loads(payload)) == H
