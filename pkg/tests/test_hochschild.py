import pytest

from khtl.complexes import FreeComplex
from khtl.compile import TangleWord
from khtl.homology import BigradedGroup, homology
from khtl.hochschild import (
    CLASP,
    CLASPED_MERIDIAN,
    DISJOINT_CIRCLE,
    HochschildError,
    bimodule,
    both_chiralities,
    coinvariants,
    hh_via_bar,
    hh_via_p20,
    s1s2_invariance_report,
    _as_complex,
)

IDENTITY = ""
E1 = "cap1 cup1"


def periodic_resolution_hh(q_window, length=12):
    """HH(A; A) for A = Z[X]/X² from the 2-periodic resolution of A over A⊗A.

    Term n is a copy of A (1 in q-degree -2n, X in -2n-2) placed in degree
    -n; the map from term n to term n-1 is 0 for n odd and 2X for n even.
    """
    gens, d = [], {}
    for n in range(length + 1):
        gens += [(-n, -2 * n), (-n, -2 * n - 2)]
    for n in range(2, length + 1, 2):
        d[2 * n] = {2 * (n - 1) + 1: 2}   # 1 in term n -> 2X in term n-1
    return homology(FreeComplex(gens, d), q_window)


def test_identity_matches_periodic_resolution():
    window = (-8, 2)
    assert hh_via_bar(IDENTITY, q_window=window).groups == periodic_resolution_hh(window)


def test_hh0_is_the_coinvariants():
    for word in (IDENTITY, E1):
        M = bimodule(_as_complex(TangleWord.parse(word, 2)))
        H = hh_via_bar(word, q_window=(-8, 4)).groups
        top = coinvariants(M)
        assert not top.is_zero()
        for (i, q), v in top.entries.items():
            if -8 <= q <= 4:
                assert H[(i, q)] == v


def test_hh0_of_identity_is_a():
    H = hh_via_bar(IDENTITY, q_window=(-2, 0)).groups
    assert H.at_q(0) == {0: (1, ())}
    assert H.at_q(-2)[0] == (1, ())


@pytest.mark.parametrize("word", [IDENTITY, E1, CLASP, "-1 -1"])
def test_bar_and_p20_agree(word):
    window = (-8, 1)
    assert hh_via_p20(word, window) == hh_via_bar(word, q_window=window).groups


def test_empty_window():
    assert hh_via_p20(IDENTITY, (1, 0)) == BigradedGroup()
    assert hh_via_p20(IDENTITY, (1, 1)) == BigradedGroup()
    assert hh_via_bar(IDENTITY, q_window=(1, 0)).groups == BigradedGroup()


def test_truncation_guard():
    with pytest.raises(HochschildError):
        hh_via_p20(IDENTITY, (-10, 0), L=2)


def test_s1s2_pair_agrees_up_to_framing():
    for word in both_chiralities(CLASPED_MERIDIAN):
        rep = s1s2_invariance_report(word, DISJOINT_CIRCLE)
        assert not rep.raw_agree and rep.framing in (-2, 2) and rep.agree


def test_non_isotopic_tangles_differ():
    rep = s1s2_invariance_report(IDENTITY, DISJOINT_CIRCLE)
    assert not rep.agree
    rep = s1s2_invariance_report(IDENTITY, E1)
    assert not rep.agree
