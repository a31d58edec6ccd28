from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ultralab import gen
from ultralab.core import pquotient
from ultralab.maps import (PointMap, ScalarField, ScalarFunction, bl_add, bl_mul, bl_norm,
                           bl_scale, dilatation, distortion, graph, is_nonexpanding,
                           modulus_profile, product_sup_dist, rho_b, rho_H, rho_s, rho_u,
                           sup_norm, theta, theta_right_limit)
from ultralab.prng import XorShift64Star
from ultralab.rational import padic_abs

seeds = st.integers(min_value=0, max_value=2 ** 32)


def ident(X):
    return PointMap(X, X, list(X.points))


def shift(X):
    return PointMap(X, X, [(x + 1) % len(X) for x in X.points])


def const(X, y):
    return PointMap(X, X, [y] * len(X))


def graph_hausdorff_oracle(f, g):
    # straight from the definition, on explicit graph point lists
    X, Y = f.domain, f.codomain
    Gf, Gg = graph(f), graph(g)

    def d(a, b):
        return max(X.d(a[0], b[0]), Y.d(a[1], b[1]))
    one = max(min(d(a, b) for b in Gg) for a in Gf)
    two = max(min(d(a, b) for a in Gf) for b in Gg)
    return max(one, two)


def test_product_sup_dist(z9):
    assert product_sup_dist(z9, z9, (0, 0), (3, 1)) == 1
    assert product_sup_dist(z9, z9, (4, 4), (4, 4)) == 0
    assert product_sup_dist(z9, z9, (0, 0), (3, 6)) == F(1, 3)


def test_map_metric_examples(z9):
    f, g = ident(z9), shift(z9)
    for metric in (rho_H, rho_s, rho_b, rho_u):
        assert metric(f, g) == 1
        assert metric(f, f) == 0
    c0, c3 = const(z9, 0), const(z9, 3)
    for metric in (rho_H, rho_s, rho_b, rho_u):
        assert metric(c0, c3) == z9.d(0, 3) == F(1, 3)


def test_table_validation(z9):
    with pytest.raises(ValueError):
        PointMap(z9, z9, [0] * 8)
    with pytest.raises(ValueError):
        PointMap(z9, z9, [9] * 9)


def test_modulus_examples(z9):
    assert theta(ident(z9), 1) == F(1, 3)
    assert theta(ident(z9), F(1, 3)) == 0
    assert all(theta(const(z9, 2), e) == 0 for e in (F(1, 9), 1, 5))
    f, g = ident(z9), shift(z9)
    prof = modulus_profile(f).pointwise_min(modulus_profile(g))
    for b in prof.breakpoints:
        assert prof.right_limit(b) == theta_right_limit(f, b, g)


def test_distortion_and_dilatation(z9):
    assert distortion(ident(z9)) == 0
    assert distortion(const(z9, 0)) == 1
    assert dilatation(shift(z9)) == 1
    assert is_nonexpanding(shift(z9))
    assert dilatation(const(z9, 4)) == 0


def test_bl_examples(z9):
    one = ScalarFunction(z9, [1] * 9, 3)
    assert (sup_norm(one), dilatation(one), bl_norm(one)) == (1, 0, 1)
    x = ScalarFunction(z9, list(range(9)), 3)
    assert (sup_norm(x), dilatation(x), bl_norm(x)) == (1, 1, 1)


def test_scalar_distances():
    Q3 = ScalarField(3)
    assert Q3.dist(F(1, 3), F(0)) == 3
    assert Q3.abs(18) == F(1, 9)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_graph_metric_matches_definition(seed):
    rng = XorShift64Star(seed)
    X = pquotient(2, 3)
    f, g = gen.random_map(rng, X, X), gen.random_map(rng, X, X)
    assert rho_H(f, g) == graph_hausdorff_oracle(f, g)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_comparison_chain(seed):
    rng = XorShift64Star(seed)
    X = pquotient(3, 2)
    f = gen.random_nonexpanding_map(rng, X) if rng.coin() else gen.random_map(rng, X, X)
    g = gen.random_nonexpanding_map(rng, X) if rng.coin() else gen.random_map(rng, X, X)
    rH, rs, ru = rho_H(f, g), rho_s(f, g), rho_u(f, g)
    assert rH <= rs and rH <= ru and rho_b(f, g) == rH
    assert rs <= max(theta_right_limit(f, rH, g), rH)
    assert theta_right_limit(f, rH, g) <= rH + min(distortion(f), distortion(g))
    if is_nonexpanding(f) or is_nonexpanding(g):
        assert rs == rH
    if is_nonexpanding(f) and is_nonexpanding(g):
        assert rH == ru == rs


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_rho_u_is_an_ultrametric(seed):
    rng = XorShift64Star(seed)
    X = pquotient(2, 2)
    f, g, h = (gen.random_map(rng, X, X) for _ in range(3))
    assert rho_u(f, g) == rho_u(g, f)
    assert rho_u(f, h) <= max(rho_u(f, g), rho_u(g, h))
    assert (rho_u(f, g) == 0) == (f.table == g.table)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_bl_norm_algebra(seed):
    rng = XorShift64Star(seed)
    X = pquotient(3, 2)
    f, g = gen.random_scalar_function(rng, X, 3), gen.random_scalar_function(rng, X, 3)
    a = gen.random_scalar(rng, 3)
    assert bl_norm(bl_add(f, g)) <= max(bl_norm(f), bl_norm(g))
    assert bl_norm(bl_scale(a, f)) == padic_abs(a, 3) * bl_norm(f)
    assert bl_norm(bl_mul(f, g)) <= bl_norm(f) * bl_norm(g)
    assert (bl_norm(f) == 0) == all(v == 0 for v in f.table)
