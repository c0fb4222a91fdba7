import pytest
from hypothesis import given, settings, strategies as st

from khtl.compile import BraidWord, crossing_complex, tangle_complex
from khtl.complexes import (
    ChainMap,
    Complex,
    Obj,
    cone,
    direct_sum,
    disjoint_union,
    dot_endomorphism,
    full_closure,
    hom_complex,
    hom_vector,
    identity_complex,
    identity_map,
    partial_trace,
    shift,
    single_object,
    tensor_v,
    zero_map,
)
from khtl.diagrams import identity_diagram, turnback
from khtl.homology import BigradedGroup, homology, is_boundary
from khtl.simplify import is_acyclic_in_window, simplify



def _letters(n, max_size):
    gens = [x for i in range(1, n) for x in (i, -i)]
    return st.lists(st.sampled_from(gens), max_size=max_size) if gens else st.just([])


@st.composite
def adjunction_pairs(draw):
    n = draw(st.integers(1, 2))
    m_word = BraidWord(n, tuple(draw(_letters(n, 2))))
    n_word = BraidWord(n + 1, tuple(draw(_letters(n + 1, 3))))
    return m_word, n_word


def closure_h(C):
    return homology(full_closure(C))


def test_cone_of_identity_is_acyclic():
    C = tangle_complex(BraidWord.parse("1 1", 2))
    K = cone(identity_map(C))
    assert is_acyclic_in_window(K, -20, 20)
    assert simplify(full_closure(K)).objects == []


def test_cone_of_zero_splits():
    C = full_closure(tangle_complex(BraidWord.parse("1", 2)))
    D = full_closure(tangle_complex(BraidWord.parse("-1 -1", 2)))
    K = cone(zero_map(C, D))
    assert homology(K) == homology(D).plus(homology(C).shifted(-1, 0))


def test_crossing_is_a_cone_of_resolutions():
    e, ident = turnback(2, 1), identity_diagram(2)
    src = single_object(ident, 1, 1)
    tgt = single_object(e, 2, 1)
    K = cone(ChainMap(src, tgt, {0: {0: {0: 1}}}))
    assert [(o.tangle, o.q, o.h) for o in K.objects] == \
        [(o.tangle, o.q, o.h) for o in crossing_complex(2, 1, 1).objects]


def test_tensor_unit_and_size():
    C = crossing_complex(3, 1, 1)
    assert closure_h(tensor_v(C, identity_complex(3))) == closure_h(C)
    assert len(tensor_v(crossing_complex(2, 1, 1), crossing_complex(2, 1, 1), deloop=False)) == 4


def test_reidemeister_two():
    C = tensor_v(crossing_complex(2, 1, 1), crossing_complex(2, 1, -1))
    assert closure_h(C) == closure_h(identity_complex(2))


def test_partial_trace_of_identity_adds_a_circle():
    H = homology(full_closure(partial_trace(identity_complex(2))))
    assert H == BigradedGroup({(0, -2): (1, ()), (0, 0): (2, ()), (0, 2): (1, ())})


def test_identity_class_in_end_of_unknot():
    C = full_closure(identity_complex(1))
    F = hom_complex(C, C)
    H = homology(F)
    assert H[(0, 0)][0] >= 1
    ident = hom_vector(F, (1, identity_map(C)))
    assert ident and not is_boundary(F, ident)


@settings(max_examples=15, deadline=None)
@given(adjunction_pairs())
def test_trace_adjunction(words):
    """Hom(M ⊔ 𝕀₁, N) ≅ Hom(M, q⁻¹·tr N) for M on n strands and N on n+1."""
    m_word, n_word = words
    M, N = tangle_complex(m_word), tangle_complex(n_word)
    lhs = homology(hom_complex(disjoint_union(M, identity_complex(1)), N))
    rhs = homology(hom_complex(M, shift(partial_trace(N), -1)))
    assert lhs == rhs


@pytest.mark.parametrize("sign", [1, -1])
def test_dot_slides_past_a_crossing_with_a_sign(sign):
    C = crossing_complex(2, 1, sign)
    F = hom_complex(C, C)
    d1, d3 = dot_endomorphism(C, 1), dot_endomorphism(C, 3)
    d1.check()
    assert is_boundary(F, hom_vector(F, (1, d1), (1, d3)))
    assert not is_boundary(F, hom_vector(F, (1, d1), (-1, d3)))
    assert not is_boundary(F, hom_vector(F, (1, d1)))


def test_bad_differentials_rejected():
    e, ident = turnback(2, 1), identity_diagram(2)
    with pytest.raises(ValueError):
        Complex(2, 2, [Obj(ident, 0, 0), Obj(e, 0, 1)], {0: {1: {0: 1}}})  # wrong q-degree
    with pytest.raises(ValueError):
        Complex(2, 2, [Obj(ident, 1, 0), Obj(e, 2, 0)], {0: {1: {0: 1}}})  # no h raise


def test_direct_sum_and_shift():
    C = full_closure(identity_complex(1))
    H = homology(direct_sum(C, shift(C, 2, 1)))
    assert H == homology(C).plus(homology(C).shifted(1, 2))
