import pytest
from hypothesis import given, settings, strategies as st

from khtl.diagrams import FlatTangle, enumerate_tl, identity_diagram, turnback
from khtl.frobcob import (
    CobMorphism,
    birth,
    compose,
    death,
    dot_morphism,
    elementary,
    hom_basis,
    identity_morphism,
    saddle_morphism,
    tensor_vertical,
)

EMPTY = FlatTangle(0, 0, [])


def test_hom_basis_sizes():
    assert len(hom_basis(identity_diagram(1), identity_diagram(1))) == 2
    assert len(hom_basis(turnback(2, 1), turnback(2, 1))) == 4
    assert len(hom_basis(identity_diagram(2), turnback(2, 1))) == 2


def test_dot_squares_to_zero():
    x = dot_morphism(identity_diagram(1), 1)
    assert compose(x, x).is_zero()


def test_spheres():
    assert compose(birth(), death()).is_zero()
    dotted_loop = CobMorphism(EMPTY, EMPTY, {0b11: 1}, 1, 1)
    assert compose(compose(birth(), dotted_loop), death()).terms == {0: 1}


def test_birth_is_the_unit_circle():
    assert birth().terms == {0: 1} and birth().target_loops == 1


def test_p2_model_maps():
    e = turnback(2, 1)
    top_minus_bottom = dot_morphism(e, 3) - dot_morphism(e, 1)
    assert top_minus_bottom.degree() == -2 and len(top_minus_bottom.terms) == 2
    s = elementary("saddle", e, identity_diagram(2))
    assert s == saddle_morphism(e, identity_diagram(2)) and s.degree() == -1


def test_elementary_rejects_unknown():
    with pytest.raises(ValueError):
        elementary("twist", identity_diagram(1))


def _random_morphism(draw, a, b):
    basis = hom_basis(a, b)
    deg = draw(st.sampled_from(sorted({d for _, d in basis})))
    masks = [m for m, d in basis if d == deg]
    coefs = draw(st.lists(st.integers(-3, 3), min_size=len(masks), max_size=len(masks)))
    return CobMorphism(a, b, dict(zip(masks, coefs)))


@st.composite
def composable_triples(draw):
    n = draw(st.integers(1, 3))
    a, b, c, d = (draw(st.sampled_from(enumerate_tl(n))) for _ in range(4))
    return _random_morphism(draw, a, b), _random_morphism(draw, b, c), _random_morphism(draw, c, d)


@settings(max_examples=60, deadline=None)
@given(composable_triples())
def test_composition_is_associative_and_unital(fgh):
    f, g, h = fgh
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(identity_morphism(f.source), f) == f
    assert compose(f, identity_morphism(f.target)) == f


@settings(max_examples=40, deadline=None)
@given(composable_triples())
def test_vertical_tensor_is_functorial(fgh):
    f, g, _ = fgh
    n = f.source.top
    i = identity_morphism(identity_diagram(n))
    # (f ⊗ id) ∘ (g ⊗ id) = (f∘g) ⊗ id, stacking the identity on top
    lhs = compose(tensor_vertical(f, i), tensor_vertical(g, i))
    rhs = tensor_vertical(compose(f, g), i)
    assert lhs == rhs
