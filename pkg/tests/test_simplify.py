from hypothesis import given, settings, strategies as st

from khtl.compile import BraidWord, closure_complex, tangle_complex
from khtl.complexes import (
    Obj,
    Complex,
    cone,
    deloop_complex,
    full_closure,
    identity_complex,
    identity_map,
    partial_trace,
)
from khtl.diagrams import FlatTangle
from khtl.homology import BigradedGroup, homology
from khtl.oracles import cube_homology
from khtl.simplify import deloop, gauss_eliminate, is_acyclic_in_window, module_homology, simplify, truncate

EMPTY = FlatTangle(0, 0, [])

braids = st.integers(2, 3).flatmap(
    lambda n: st.lists(st.sampled_from([x for i in range(1, n) for x in (i, -i)]), max_size=5)
    .map(lambda xs: BraidWord(n, tuple(xs))))


def as_oracle(H):
    return {k: (f, tuple(sorted(t))) for k, (f, t) in H.entries.items()}


def test_deloop_one_circle():
    C = Complex(0, 0, [Obj(EMPTY, 0, 0, 1)])
    D = deloop(C)
    assert sorted(o.q for o in D.objects) == [-1, 1] and not D.d
    assert not D.has_loops()
    assert deloop(D) is D or deloop(D).objects == D.objects


def test_deloop_preserves_hopf_homology():
    C = full_closure(tangle_complex(BraidWord.parse("1 1", 2), reduce=False))
    assert homology(deloop_complex(C)) == homology(C)
    assert as_oracle(homology(C)) == cube_homology(2, (1, 1))


def test_gauss_elimination_examples():
    K = cone(identity_map(tangle_complex(BraidWord.parse("1", 2))))
    assert simplify(K).objects == []
    C = closure_complex(BraidWord.parse("1 1", 2))
    assert len(C.objects) <= 6
    assert as_oracle(homology(C)) == cube_homology(2, (1, 1))
    again = gauss_eliminate(C)
    assert len(again.objects) == len(C.objects)


@settings(max_examples=40, deadline=None)
@given(braids)
def test_simplify_preserves_homology(w):
    raw = closure_complex(w, reduce=False)
    assert homology(simplify(raw)) == homology(raw)


@settings(max_examples=25, deadline=None)
@given(braids)
def test_simplify_preserves_module_homology(w):
    raw = tangle_complex(w, reduce=False)
    assert module_homology(simplify(raw)) == module_homology(raw)


def test_truncate_keeps_low_degrees():
    C = closure_complex(BraidWord.parse("1 1 1 1 1", 2))
    T = truncate(C, 6)
    assert T.valid[1] <= 7
    assert homology(T, (-20, 5)) == homology(C, (-20, 5))


def test_acyclicity_checks():
    assert not is_acyclic_in_window(identity_complex(2), -5, 5)
    K = cone(identity_map(partial_trace(identity_complex(2))))
    assert is_acyclic_in_window(K, -5, 5)
    assert homology(full_closure(K)) == BigradedGroup()
