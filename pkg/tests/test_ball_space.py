from fractions import Fraction as F

import pytest

from ultralab.ball_space import (AffineForm, M_FLAT, M_FLAT_BAR, ball_space_from_doc,
                                 check_jx_isometry, diam_functional, embed_point,
                                 enumerate_balls, lift_space)
from ultralab.core import explicit_space, hausdorff, neighborhood, pquotient
from ultralab.oracles import metric_axiom_suite


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3),
                                 (5, 1), (5, 2)])
def test_ball_count_formula(p, n):
    assert len(enumerate_balls(pquotient(p, n))) == (p ** (n + 1) - 1) // (p - 1)


def test_flat_bar_equals_flat_on_finite_models(z9):
    a, b = enumerate_balls(z9, M_FLAT), enumerate_balls(z9, M_FLAT_BAR)
    assert [x.members for x in a.balls] == [x.members for x in b.balls]


def test_flat_without_singletons():
    X = pquotient(3, 2, include_singleton_balls=False)
    bs = enumerate_balls(X, M_FLAT)
    assert len(bs) == 4 and all(len(b) == 3 or len(b) == 9 for b in bs.balls)


def test_lift_of_two_point_quotient():
    L = lift_space(pquotient(2, 1))
    # balls ordered {0,1}, {0}, {1}; every pair sits at distance 1
    assert len(L) == 3 and L.is_ultrametric
    assert all(L.d(i, j) == 1 for i in range(3) for j in range(3) if i != j)


def test_lift_of_point_and_iterated_lift():
    assert len(lift_space(explicit_space(["x"], [["0"]]))) == 1
    L2 = lift_space(pquotient(2, 1), depth=2)
    v = metric_axiom_suite(list(L2.points), L2.d, strong=True)
    assert L2.is_ultrametric and v.ok


@pytest.mark.parametrize("p,n", [(5, 2), (3, 2), (2, 3)])
def test_jx_isometry(p, n):
    X = pquotient(p, n)
    assert check_jx_isometry(X).ok
    assert embed_point(X, 0).members == {0}


def test_lifted_distances_match_hausdorff(z9):
    bs = enumerate_balls(z9)
    for i, a in enumerate(bs.balls):
        for j, b in enumerate(bs.balls):
            assert bs.dist(i, j) == hausdorff(z9, a.members, b.members)


def test_chains_agree_with_neighborhoods(z9):
    bs = enumerate_balls(z9)
    for i, b in enumerate(bs.balls):
        for eps in (F(1, 27), F(1, 9), F(1, 6), F(1, 3), F(2, 3), F(1), F(2)):
            assert bs.balls[bs.coarsen(i, eps)].members == neighborhood(z9, b.members, eps)
    # the whole space has no coarsening steps
    assert bs.chains()[bs.whole] == ()


def test_doc_round_trip(z9):
    bs = enumerate_balls(z9)
    assert ball_space_from_doc(bs.to_doc()) == bs
    bad = bs.to_doc()
    bad["balls"][1] = [0, 1]
    with pytest.raises(ValueError):
        ball_space_from_doc(bad)


def test_diameter_functional(z9):
    bs = enumerate_balls(z9)
    B = bs.balls[bs.index_of({0, 3, 6})]
    assert diam_functional(AffineForm(F(1)), B) == F(1, 3)
    assert all(diam_functional(AffineForm(F(0), F(7)), b) == 7 for b in bs.balls)
    assert diam_functional({0: 5, F(1, 3): 2, 1: 0}, B) == 2
    with pytest.raises(KeyError):
        diam_functional({0: 5}, B)


def test_diameters_bounded_by_hausdorff(z9):
    bs = enumerate_balls(z9)
    for i, a in enumerate(bs.balls):
        for j, b in enumerate(bs.balls):
            if i != j:
                assert max(a.diameter, b.diameter) <= bs.dist(i, j)
