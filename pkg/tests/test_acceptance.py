"""Acceptance gate: one test per criterion, each printing a single
PASS/FAIL line. All comparisons are exact (tolerance zero)."""

import itertools
import json
import subprocess
import sys
import time
from fractions import Fraction as F

import pytest

from ultralab import verify
from ultralab.ball_space import check_jx_isometry, enumerate_balls, lift_space
from ultralab.core import all_balls, hausdorff, hausdorff_ball_formula, neighborhood, pquotient
from ultralab.ballmaps import example48
from ultralab.oracles import brute_hausdorff, metric_axiom_suite
from ultralab import gen
from ultralab.prng import XorShift64Star

SEED = verify.RunConfig.seed


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def suite(claim, trials, cfg=None):
    cfg = cfg or verify.RunConfig(seed=SEED)
    t = time.perf_counter()
    r = verify.run_claim(claim, cfg, trials=trials)
    return r, time.perf_counter() - t


def test_criterion_01_ball_formula_all_pairs(report):
    t = time.perf_counter()
    fails = pairs = 0
    for p, n in ((2, 4), (3, 3), (5, 2)):
        X = pquotient(p, n)
        for a, b in itertools.combinations_with_replacement(all_balls(X), 2):
            pairs += 1
            if hausdorff_ball_formula(a, b) != brute_hausdorff(X, a.members, b.members):
                fails += 1
    dt = time.perf_counter() - t
    report(1, fails == 0 and dt < 10, f"{pairs} ball pairs, {fails} failures, {dt:.1f}s (limit 10s)")


def test_criterion_02_disjoint_ball_criterion(report):
    r, dt = suite("disjoint-ball-criterion", 200)
    report(2, r.ok and r.checks == 400 and dt < 30,
           f"200 ultrametric + 200 non-ultrametric models, {dt:.1f}s (limit 30s)")


def test_criterion_03_neighborhoods_and_strong_triangle(report):
    X = pquotient(3, 3)
    bs = enumerate_balls(X)
    grid = [F(1, 81), F(1, 27), F(1, 18), F(1, 9), F(1, 6), F(1, 3), F(2, 3), F(1), F(2)]
    ok = True
    for b in bs.balls:
        for e in grid:
            U = neighborhood(X, b.members, e)
            ok &= neighborhood(X, U, e) == U
            for e2 in grid:
                ok &= neighborhood(X, U, e2) == neighborhood(X, b.members, max(e, e2))
    rng = XorShift64Star(SEED)
    for _ in range(1000):
        A, B, C = (gen.random_subset(rng, X.points) for _ in range(3))
        ok &= hausdorff(X, A, C) <= max(hausdorff(X, A, B), hausdorff(X, B, C))
    r, _ = suite("neighborhood-calculus", 50)
    report(3, ok and r.ok, "idempotence/composition on all balls of Z/27, 1000 subset triples")


def test_criterion_04_ball_space_tower(report):
    ok = check_jx_isometry(pquotient(5, 2)).ok
    for X in (pquotient(5, 2), pquotient(3, 2), pquotient(2, 1)):
        for depth in (1, 2):
            L = lift_space(X, depth)
            ok &= L.is_ultrametric and metric_axiom_suite(list(L.points), L.d, strong=True).ok
    r, _ = suite("ball-space-tower", 1)
    report(4, ok and r.ok, "j_X isometry on Z/25, lift and lift^2 ultrametric")


def test_criterion_05_map_metrics(report):
    t = time.perf_counter()
    rs = [suite(c, 1000)[0] for c in
          ("graph-sup-chain", "map-metric-comparison", "nonexpanding-graph-equality")]
    dt = time.perf_counter() - t
    report(5, all(r.ok for r in rs) and dt < 60,
           f"1000 pairs/triples per model, {sum(r.checks for r in rs)} checks, {dt:.1f}s (limit 60s)")


def test_criterion_06_beta_metric_axioms(report):
    r, dt = suite("beta-metric-axioms", 500)
    report(6, r.ok, f"500 triples, 1000 pairs, 200 lambda=1 class pairs per model, "
                    f"{r.checks} checks, {dt:.1f}s")


def test_criterion_07_lambda_monotone_and_bracket(report):
    r, dt = suite("beta-lambda-monotone", 500)
    report(7, r.ok, f"500 pairs per model inside grid brackets, {dt:.1f}s")


def test_criterion_08_h_functionals_and_limits(report):
    rs = [suite(c, 500)[0] for c in
          ("h-functional-identities", "beta-limit-identities", "beta-limit-corollaries")]
    report(8, all(r.ok for r in rs), "500 scalar ball-map pairs per model, d_a = 0 asserted")


def test_criterion_09_non_admissible_chain(report):
    r, _ = suite("non-admissible-chain-map", 20)
    w = example48(F(1, 2), F(10))
    report(9, r.ok and r.checks == 20 and w.rho_s == 2 and w.distance > 10,
           f"rho_s = {w.rho_s}, 20 (delta, eps) witnesses with 1/r > eps")


def test_criterion_10_dilation_transport(report):
    r, _ = suite("dilation-transport", 20)
    report(10, r.ok, f"|a| in {{3, 1/3, 1}}, domain and range forms, {r.checks} predicate checks")


def test_criterion_11_bl_norm_algebra(report):
    r, _ = suite("bl-norm-algebra", 1000)
    report(11, r.ok and r.checks == 1000, "1000 function pairs on Z/9 with |.|_3")


def test_criterion_12_dudley_metric(report):
    r, dt = suite("dudley-metric-axioms", 20)
    report(12, r.ok and dt < 120, f"20 measures, all triples, Dirac pair 1/2, {dt:.1f}s (limit 120s)")


def test_criterion_13_measure_convergence(report):
    from ultralab.measures import TestFunction, convergence_analyzer, indicator, make_measure
    ok = True
    for p, N in ((2, 3), (3, 2)):
        nu = make_measure("random", p, N, seed=SEED)
        zero = make_measure("table", p, N, atoms=[0] * p ** N)
        panel = [indicator(p, N, k, 0) for k in range(1, N + 1)] + \
            [TestFunction(p, N, list(range(p ** N)))]
        rep = convergence_analyzer(lambda n: nu.scale(F(p) ** n), zero, panel, 12)
        ok &= rep.verdict == "PASS"
        rho = [row[1] for row in rep.rows]
        ok &= all(b < a for a, b in zip(rho, rho[1:]))
    r, _ = suite("measure-convergence", 5)
    report(13, ok and r.ok, "p^n nu for n <= 12: every column nonincreasing, verdict PASS")


def _lab(*args):
    return subprocess.run([sys.executable, "-m", "ultralab.cli", *args],
                          capture_output=True, text=True)


def test_criterion_14_lab_verify(report, tmp_path):
    good = _lab("verify")
    neg = _lab("verify", "--inject-bug", "--out", str(tmp_path))
    doc = json.loads(neg.stdout)
    failed = [row["claim"] for row in doc["claims"] if row["result"] == "fail"]
    witness = json.loads((tmp_path / "witness-ball-hausdorff-formula.json").read_text())
    ok = (good.returncode == 0 and json.loads(good.stdout)["passed"]
          and neg.returncode == 1 and "ball-hausdorff-formula" in failed
          and {"ball1", "ball2"} <= set(witness["payload"]))
    report(14, ok, f"default exit {good.returncode}; injected bug exit {neg.returncode}, "
                   f"failing claims {failed}")
