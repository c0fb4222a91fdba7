import pytest

from khtl.gor import GorAlgebra, an_homology, compare_stable, gor_compare, wn_ranks, wn_series
from khtl.homology import BigradedGroup


def test_unit_only_in_low_window():
    assert an_homology(3, 0) == BigradedGroup({(0, 0): (1, ())})


def test_two_torsion_from_xi2():
    H = an_homology(2, 8, include_xi_n=True)
    assert H[(2, 6)] == (0, (2,))


@pytest.mark.parametrize("n,xi", [(2, True), (3, False), (3, True), (4, True)])
def test_d_squared_vanishes(n, xi):
    A = GorAlgebra(n, 16, xi)
    A.check_d_squared()
    A.free_complex(dual=True).check()
    A.free_complex(dual=False).check()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_wn_ranks_match_generating_function(n):
    R = wn_ranks(n, 14)
    series = wn_series(n, 14)
    assert {k: f for k, (f, _) in R.entries.items() if f} == series


def test_self_comparison_is_identity():
    H = an_homology(3, 12, include_xi_n=True)
    c = compare_stable(H, H, (-3, 12))
    assert c.normalization == (1, 0, 0) and c.agree and c.free_agree


def test_n3_free_ranks_and_exact_variant():
    rep = gor_compare(3, 15)
    assert rep.variants["ξ_2..ξ_3, chain homology"].free_agree
    assert rep.matching == ["ξ_2..ξ_3, cochain dual"]
    assert all(c.retract_ok for c in rep.variants.values())
