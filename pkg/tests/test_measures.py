from fractions import Fraction as F
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ultralab.measures import (LevelMeasure, TestFunction, UnboundedNormError,
                               convergence_analyzer, dudley, indicator, integrate_step,
                               integrate_with_modulus, make_measure, measure_from_doc,
                               measure_norm)
from ultralab.oracles import exhaustive_dudley
from ultralab.rational import padic_abs

seeds = st.integers(min_value=0, max_value=2 ** 32)


def panel(p, N):
    return [indicator(p, N, k, 0) for k in range(1, N + 1)] + \
        [TestFunction(p, N, list(range(p ** N)))]


def test_norm_examples():
    assert measure_norm(make_measure("dirac", 3, 2, a=4)) == 1
    assert measure_norm(make_measure("haar", 2, 3)) == 8
    assert measure_norm(make_measure("table", 2, 2, atoms=[0, 0, 0, 0])) == 0


def test_constructors():
    d = make_measure("dirac", 3, 2, a=0)
    assert d.atoms == tuple([F(1)] + [F(0)] * 8)
    h = make_measure("haar", 2, 2)
    assert set(h.atoms) == {F(1, 4)} and h.value(1, 0) == F(1, 2)
    r1, r2 = make_measure("random", 3, 2, seed=7), make_measure("random", 3, 2, seed=7)
    assert r1 == r2 and measure_norm(r1) <= 9


def test_additivity_of_ball_values():
    mu = make_measure("random", 2, 3, seed=11)
    for k in range(3):
        for a in range(2 ** k):
            assert mu.value(k, a) == mu.value(k + 1, a) + mu.value(k + 1, a + 2 ** k)


def test_doc_round_trip():
    mu = make_measure("random", 2, 2, seed=3)
    assert measure_from_doc(mu.to_doc()) == mu
    doc = measure_from_doc({"p": 2, "level": 2, "atoms": {"0": "1", "2": "-1"}})
    assert doc.atoms == (1, 0, -1, 0)
    with pytest.raises(ValueError):
        measure_from_doc({"p": 2, "level": 2, "atoms": {"4": "1"}})


def test_integral_examples():
    d0 = make_measure("dirac", 2, 3, a=0)
    assert integrate_step(indicator(2, 3, 1, 0), d0) == 1
    mu = make_measure("random", 2, 3, seed=5)
    one = TestFunction(2, 0, [1])
    assert integrate_step(one, mu) == mu.value(0, 0) == sum(mu.atoms)
    for k, a in mu.balls():
        assert integrate_step(indicator(2, 3, k, a), mu) == mu.value(k, a)


def test_riemann_sum_error():
    f = TestFunction(2, 2, [1, 0, 3, F(1, 2)])
    mu = make_measure("random", 2, 3, seed=9)
    approx, err = integrate_with_modulus(f, mu, 0)
    assert err == 0 and approx == integrate_step(f, mu)
    d0 = make_measure("dirac", 2, 3, a=0)
    approx, err = integrate_with_modulus(lambda x: x, d0, F(1, 8))
    assert approx == 0 and err == F(1, 8)
    _, err2 = integrate_with_modulus(lambda x: x, d0.scale(2), F(1, 8))
    assert err2 == err / 2


def test_dudley_dirac_pair():
    d0, d2 = make_measure("dirac", 2, 2, a=0), make_measure("dirac", 2, 2, a=2)
    b = dudley(d0, d2, "exact_small", 3)
    assert (b.lower, b.exact, b.upper) == (F(1, 4), F(1, 2), F(1))
    assert b.exact == exhaustive_dudley(2, 2, 3, d0, d2)
    same = dudley(d0, d0, "exact_small", 3)
    assert (same.lower, same.exact, same.upper) == (0, 0, 0)


def test_dudley_guards():
    mu = make_measure("dirac", 3, 2)
    with pytest.raises(ValueError):
        dudley(mu, mu, "exact_small", 3)
    d = make_measure("dirac", 2, 2)
    with pytest.raises(ValueError):
        dudley(d, d, "exact_small", 2)
    with pytest.raises(ValueError):
        dudley(d, make_measure("dirac", 2, 1), "bounds")


@pytest.mark.parametrize("c", [F(1), F(2), F(1, 2), F(-3)])
def test_single_atom_difference_against_oracle(c):
    zero = make_measure("table", 2, 2, atoms=[0, 0, 0, 0])
    for a in range(4):
        vals = [0] * 4
        vals[a] = c
        mu = make_measure("table", 2, 2, atoms=vals)
        b = dudley(mu, zero, "exact_small", 3)
        assert b.exact == exhaustive_dudley(2, 2, 3, mu, zero)
        assert b.lower <= b.exact <= b.upper == padic_abs(c, 2)


@settings(max_examples=15, deadline=None)
@given(seeds, seeds)
def test_dudley_exact_matches_oracle(s1, s2):
    m1 = make_measure("random", 2, 2, seed=s1, vmin=-1, vmax=1)
    m2 = make_measure("random", 2, 2, seed=s2, vmin=-1, vmax=1)
    b = dudley(m1, m2, "exact_small", 3)
    assert b.exact == exhaustive_dudley(2, 2, 3, m1, m2)
    assert b.lower <= b.exact <= b.upper


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=3))
def test_integral_norm_estimate(seed, M):
    mu = make_measure("random", 2, 3, seed=seed)
    f = TestFunction(2, M, [F(seed % (j + 2), j + 1) for j in range(2 ** M)])
    assert padic_abs(integrate_step(f, mu), 2) <= f.sup_norm() * measure_norm(mu)


@pytest.mark.parametrize("p,N", [(2, 3), (3, 2)])
def test_convergence_of_scaled_family(p, N):
    nu = make_measure("random", p, N, seed=21)
    zero = make_measure("table", p, N, atoms=[0] * p ** N)
    rep = convergence_analyzer(lambda n: nu.scale(F(p) ** n), zero, panel(p, N), 12)
    assert rep.verdict == "PASS"
    rho = [row[1] for row in rep.rows]
    assert rho == [measure_norm(nu) / p ** n for n in range(1, 13)]
    assert rep.columns[:5] == ["n", "rho_s", "beta", "dudley_lower", "dudley_upper"]
    assert rep.to_csv().splitlines()[0].endswith("verdict")


def test_constant_sequence_has_zero_columns():
    mu = make_measure("random", 2, 2, seed=2)
    rep = convergence_analyzer(lambda n: mu, mu, panel(2, 2), 3)
    assert rep.verdict == "PASS"
    assert all(v == 0 for row in rep.rows for v in row[1:-1])


def test_unbounded_family_is_rejected():
    nu = make_measure("dirac", 2, 2)
    zero = make_measure("table", 2, 2, atoms=[0] * 4)
    with pytest.raises(UnboundedNormError):
        convergence_analyzer(lambda n: nu.scale(F(1, 2 ** n)), zero, panel(2, 2), 4)


def test_test_function_levels():
    with pytest.raises(ValueError):
        integrate_step(TestFunction(2, 3, [0] * 8), make_measure("dirac", 2, 2))
    assert isinstance(make_measure("haar", 2, 2), LevelMeasure)
    assert list(itertools.islice(make_measure("haar", 2, 1).balls(), 3)) == [(0, 0), (1, 0), (1, 1)]
