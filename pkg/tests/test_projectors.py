import pytest

from khtl.complexes import full_closure, identity_complex
from khtl.homology import BigradedGroup, homology
from khtl.projectors import (
    VerificationError,
    cellular_homology,
    ck_projector_window,
    ck_report,
    ck_tower,
    closure_window,
    cone_bound,
    p2_window,
    p2_zigzag,
    p20_zigzag,
    q3_adjudication,
    sphere_row,
    stable_kh,
    stable_range,
    stage_homologies,
    turnback_slide,
    twist_tower,
    verify_projector,
)


def test_stable_range_formula():
    assert stable_range(3, 5) == 3
    assert stable_range(3, 7) == 5
    assert stable_range(2, 0) == 0
    assert stable_range(2, -8) == 0


def test_turnback_slide_cases():
    # n = 4, m = 2: r = 2, so i = 1 < n - r, i = 2 = n - r, i = 3 > n - r
    a, b, c = (turnback_slide(4, 2, i) for i in (1, 2, 3))
    assert (a.r_prime, a.s) == (2, 6)
    assert (b.r_prime, b.s) == (1, 6)
    assert (c.r_prime, c.s) == (0, 12)
    assert [x.i_prime for x in (a, b, c)] == [3, 0, 1]
    with pytest.raises(ValueError):
        turnback_slide(3, 1, 3)


def test_cone_bound_grows():
    bounds = [cone_bound(3, m) for m in range(12)]
    assert bounds == sorted(bounds) and bounds[-1] > bounds[0]


def test_twist_tower_stages_stabilize_at_low_q():
    hs = stage_homologies(2, 6, q_max=4)
    assert hs[4].restrict(-2, 2) == hs[5].restrict(-2, 2) == hs[6].restrict(-2, 2)
    tower = twist_tower(2, 3, keep_maps=True)
    for f in tower.maps:
        f.check()


def test_stable_rows():
    H = stable_kh(3, (-3, 5))
    assert H.at_q(-3) == {0: (1, ())}
    assert H.at_q(5) == {3: (1, ()), 4: (1, ())}


def test_stabilization_is_checked():
    # at n = 2, q = 0 the closure only settles one twist after the bound
    with pytest.raises(VerificationError):
        stable_kh(2, (0, 0), safety_extra=0)


def test_p2_zigzag_small_and_closure():
    assert p2_zigzag(1).summary() == identity_complex(2).summary()
    S = stable_kh(2, (-2, 12))
    for L in (3, 5, 7):
        C = p2_zigzag(L)
        hi = closure_window(C, 100)
        assert homology(full_closure(C), (-2, hi)) == S.restrict(-2, hi)


@pytest.mark.parametrize("L", [4, 6])
def test_p2_zigzag_is_a_projector(L):
    rep = verify_projector(p2_zigzag(L), p2_window(L))
    assert rep.ok, rep.text()


def test_identity_is_not_a_projector():
    rep = verify_projector(identity_complex(2), (-2, 3))
    assert not rep.ok
    assert all("(i,q)=" in line for line in rep.failures())


def test_p20_zigzags_are_complexes():
    for dual in (True, False):
        C = p20_zigzag(4, dual)
        C.check()
        assert len(C.objects) == 4


def test_cooper_krushkal_tower():
    tower = ck_tower(3, 2, 10)
    rep = ck_report(tower)
    assert rep.ok, rep.text()
    lo, hi = ck_projector_window(tower)
    assert verify_projector(tower.stage(2), (lo, hi), smaller=p2_zigzag(10)).ok


def test_cellular_homology():
    rp2 = cellular_homology({0: 1, 1: 1, 2: 1}, {1: 0, 2: 2})
    assert rp2 == BigradedGroup({(0, 0): (1, ()), (1, 0): (0, (2,))})
    rp2_coh = cellular_homology({0: 1, 1: 1, 2: 1}, {1: 0, 2: 2}, cohomology=True)
    assert rp2_coh == BigradedGroup({(0, 0): (1, ()), (2, 0): (0, (2,))})
    assert sphere_row(5, [3, 4]) == BigradedGroup({(3, 5): (1, ()), (4, 5): (1, ())})


def test_q3_adjudication_names_one_table():
    H, verdict = q3_adjudication()
    assert H.at_q(3) == {3: (0, (2,)), 4: (1, ())}
    assert sum(verdict.values()) == 1
    assert verdict["projective-quotient table (cohomology)"]
