"""Seeded verification suites, one per claim, and the runner behind
`lab verify`. Each suite returns the number of checks made and either None
or a Witness that replays through the core modules."""

import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import gen
from .ball_space import (AffineForm, M_FLAT, M_FLAT_BAR, check_jx_isometry, diam_functional,
                         enumerate_balls, lift_space)
from .ballmaps import (BallMap, CpBallDomain, admissibility, beta, beta_feasible, beta_limits,
                       beta_scan, beta_star, class_membership, eta, example48, h_functionals,
                       omega_functionals, scale_domain, scale_range)
from .core import (all_balls, explicit_space, hausdorff, hausdorff_ball_formula, inject_fault,
                   make_space, neighborhood, prop22_check, pquotient, set_diam, set_dist,
                   space_spec)
from .maps import (PointMap, ScalarField, ScalarFunction, bl_add, bl_mul, bl_norm, bl_scale,
                   dilatation, distortion, is_nonexpanding, modulus_profile, rho_b, rho_H,
                   rho_s, rho_u, sup_norm, theta_right_limit)
from .measures import (TestFunction, convergence_analyzer, dudley, indicator, integrate_step,
                       integrate_with_modulus, make_measure, measure_norm)
from .oracles import Witness, brute_hausdorff, exhaustive_dudley, grid_beta, metric_axiom_suite
from .prng import MASK, XorShift64Star, _splitmix64
from .rational import INF, fmt, padic_abs

SCHEMA = "ultrametric-lab/1"

FIXED_ULTRAMETRIC = {
    "model": "explicit",
    "points": ["a", "b", "c", "d", "e"],
    "matrix": [["0", "1/4", "1/2", "1", "1"],
               ["1/4", "0", "1/2", "1", "1"],
               ["1/2", "1/2", "0", "1", "1"],
               ["1", "1", "1", "0", "1/3"],
               ["1", "1", "1", "1/3", "0"]],
}

DEFAULT_ROSTER = (
    {"model": "pquotient", "p": 2, "n": 3},
    {"model": "pquotient", "p": 3, "n": 2},
    FIXED_ULTRAMETRIC,
)

DEFAULT_LAMBDAS = ("1/2", "1", "2", "3")


@dataclass
class RunConfig:
    seed: int = 20241014
    trials: dict = field(default_factory=dict)
    roster: tuple = DEFAULT_ROSTER
    lambdas: tuple = DEFAULT_LAMBDAS
    out: str = None
    format: str = "json"
    workers: int = 1
    inject_fault: str = None

    def trials_for(self, claim):
        return self.trials.get(claim, DEFAULT_TRIALS[claim])

    def spaces(self):
        return [make_space(s) for s in self.roster]

    def lambda_values(self):
        return [Fraction(l) for l in self.lambdas]


def claim_seed(seed, claim):
    h = 0xCBF29CE484222325
    for ch in claim.encode():
        h = ((h ^ ch) * 0x100000001B3) & MASK
    return _splitmix64((int(seed) & MASK) ^ h)


def _p_of(X):
    return X.params.get("p", 2)


def _labels(bs, ids):
    return [bs.balls[i].label() for i in ids]


def _tab(P):
    return [fmt(v) if isinstance(v, Fraction) else P.codomain.labels[v] for v in P.table]


# --------------------------------------------------------------- suites

def suite_ball_formula(cfg, rng, trials):
    checks = 0
    models = [pquotient(2, 4), pquotient(3, 3), pquotient(5, 2)] + cfg.spaces()
    for X in models:
        balls = all_balls(X)
        for i, b1 in enumerate(balls):
            for b2 in balls[i:]:
                f = hausdorff_ball_formula(b1, b2)
                brute = brute_hausdorff(X, b1.members, b2.members)
                checks += 1
                if f != brute or f != hausdorff(X, b1.members, b2.members):
                    return checks, Witness("ball-hausdorff-formula", {
                        "space": space_spec(X), "ball1": b1.label(), "ball2": b2.label(),
                        "formula": fmt(f), "brute": fmt(brute)})
                if b1 != b2 and f < max(b1.diameter, b2.diameter):
                    return checks, Witness("ball-hausdorff-formula", {
                        "space": space_spec(X), "ball1": b1.label(), "ball2": b2.label(),
                        "reason": "distance below the larger diameter"})
        disjoint = [(a, b) for a, b in itertools.combinations(balls, 2)
                    if a.members.isdisjoint(b.members)]
        for _ in range(trials if disjoint else 0):
            b1, b2 = rng.choice(disjoint)
            A1, A2 = gen.random_subset(rng, b1.members), gen.random_subset(rng, b2.members)
            checks += 1
            if hausdorff(X, A1, A2) != hausdorff_ball_formula(b1, b2):
                return checks, Witness("ball-hausdorff-formula", {
                    "space": space_spec(X), "subset1": sorted(A1), "subset2": sorted(A2),
                    "ball1": b1.label(), "ball2": b2.label()})
    return checks, None


def suite_disjoint_balls(cfg, rng, trials):
    checks = 0
    for _ in range(trials):
        X = gen.random_ultrametric(rng)
        v = prop22_check(X)
        checks += 1
        if not v.ok:
            return checks, Witness("disjoint-ball-criterion", {
                "space": space_spec(X), "expected": "consistent", "got": v.witness})
    for _ in range(trials):
        X = gen.random_non_ultrametric(rng)
        v = prop22_check(X)
        checks += 1
        if v.ok:
            return checks, Witness("disjoint-ball-criterion", {
                "space": space_spec(X), "expected": "violation", "got": "consistent"})
    return checks, None


def _eps_grid(X):
    vals = list(X.distance_values())
    grid = set(v for v in vals if v > 0)
    for a, b in zip(vals, vals[1:]):
        grid.add((a + b) / 2)
    grid.add(vals[-1] + 1)
    return sorted(grid)


def suite_neighbourhood(cfg, rng, trials):
    checks = 0
    for X in [pquotient(3, 3)] + cfg.spaces():
        bs = enumerate_balls(X, M_FLAT_BAR)
        grid = _eps_grid(X)
        whole = frozenset(X.points)
        for i, b in enumerate(bs.balls):
            centre = min(b.members)
            for e in grid:
                U = neighborhood(X, b.members, e)
                closed = b.members if e <= b.diameter else frozenset(
                    x for x in X.points if X.d(centre, x) < e)
                checks += 1
                bad = None
                if U != closed:
                    bad = "closed form"
                elif neighborhood(X, U, e) != U:
                    bad = "idempotence"
                elif bs.balls[bs.coarsen(i, e)].members != U:
                    bad = "coarsening chain"
                elif U != whole and set_dist(X, U, whole - U) < e:
                    bad = "separation"
                if bad:
                    return checks, Witness("neighborhood-calculus", {
                        "space": space_spec(X), "ball": b.label(), "eps": fmt(e), "law": bad})
                for e2 in grid:
                    checks += 1
                    if neighborhood(X, U, e2) != neighborhood(X, b.members, max(e, e2)):
                        return checks, Witness("neighborhood-calculus", {
                            "space": space_spec(X), "ball": b.label(), "eps": [fmt(e), fmt(e2)],
                            "law": "composition"})
        for _ in range(trials):
            A = gen.random_subset(rng, X.points)
            e = rng.choice(grid)
            U = neighborhood(X, A, e)
            checks += 1
            if neighborhood(X, U, e) != U or (U != whole and set_dist(X, U, whole - U) < e):
                return checks, Witness("neighborhood-calculus", {
                    "space": space_spec(X), "set": sorted(A), "eps": fmt(e),
                    "law": "idempotence/separation on an arbitrary set"})
    return checks, None


def suite_hausdorff_triangle(cfg, rng, trials):
    checks = 0
    for X in cfg.spaces():
        for _ in range(trials):
            A, B, C = (gen.random_subset(rng, X.points) for _ in range(3))
            ac, ab, bc = hausdorff(X, A, C), hausdorff(X, A, B), hausdorff(X, B, C)
            checks += 1
            if ac > max(ab, bc):
                return checks, Witness("hausdorff-strong-triangle", {
                    "space": space_spec(X), "sets": [sorted(A), sorted(B), sorted(C)],
                    "values": [fmt(ab), fmt(bc), fmt(ac)]})
    bs = enumerate_balls(pquotient(3, 2))
    v = metric_axiom_suite(bs.balls, lambda a, b: hausdorff(a.space, a.members, b.members),
                           strong=True, label=lambda b: b.label())
    checks += 1
    if not v.ok:
        return checks, Witness("hausdorff-strong-triangle", v.witness)
    return checks, None


def suite_ball_tower(cfg, rng, trials):
    checks = 0
    for p, ns in ((2, (1, 2, 3, 4)), (3, (1, 2, 3)), (5, (1, 2))):
        for n in ns:
            X = pquotient(p, n)
            count = len(enumerate_balls(X))
            checks += 1
            if count != (p ** (n + 1) - 1) // (p - 1):
                return checks, Witness("ball-space-tower", {"space": space_spec(X), "count": count})
            if [b.members for b in enumerate_balls(X, M_FLAT_BAR).balls] != \
                    [b.members for b in enumerate_balls(X).balls]:
                return checks, Witness("ball-space-tower", {"space": space_spec(X),
                                                            "reason": "M_flat_bar differs"})
    for X in [pquotient(5, 2), pquotient(2, 1)] + cfg.spaces():
        v = check_jx_isometry(X)
        checks += 1
        if not v.ok:
            return checks, Witness("ball-space-tower", v.witness)
    for X in [pquotient(2, 1), pquotient(3, 2), pquotient(2, 3), explicit_space(["x"], [["0"]])] \
            + cfg.spaces():
        for depth in (1, 2):
            L = lift_space(X, depth)
            v = metric_axiom_suite(list(L.points), L.d, strong=True, label=lambda i: L.labels[i])
            checks += 1
            if not L.is_ultrametric or not v.ok:
                return checks, Witness("ball-space-tower", {
                    "space": space_spec(X), "depth": depth, "witness": v.witness})
    return checks, None


def suite_diameter_functional(cfg, rng, trials):
    checks = 0
    for X in cfg.spaces():
        bs = enumerate_balls(X, M_FLAT_BAR)
        balls = bs.balls
        for a, b in itertools.combinations(balls, 2):
            dh = hausdorff_ball_formula(a, b)
            checks += 1
            if max(a.diameter, b.diameter) > dh:
                return checks, Witness("diameter-functional", {
                    "space": space_spec(X), "balls": [a.label(), b.label()]})
        diams = sorted({b.diameter for b in balls})
        for _ in range(trials):
            slope = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            icpt = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            f = AffineForm(slope, icpt)
            tab = {dv: slope * dv + icpt for dv in diams}
            b = rng.choice(balls)
            checks += 1
            if diam_functional(f, b) != diam_functional(tab, b) or \
                    diam_functional(f, b) != slope * set_diam(X, b.members) + icpt:
                return checks, Witness("diameter-functional", {"space": space_spec(X),
                                                               "ball": b.label()})
    return checks, None


def _map_pairs(cfg):
    spaces = cfg.spaces()
    return [(X, X) for X in spaces] + [(pquotient(2, 3), pquotient(3, 2))]


def _maybe_nonexpanding(rng, X, Y):
    if X is Y or X == Y:
        if rng.coin():
            return gen.random_nonexpanding_map(rng, X)
    return gen.random_map(rng, X, Y)


def suite_graph_sup_chain(cfg, rng, trials):
    checks = 0
    for X, Y in _map_pairs(cfg):
        for _ in range(trials):
            f, g = _maybe_nonexpanding(rng, X, Y), _maybe_nonexpanding(rng, X, Y)
            rH, rs = rho_H(f, g), rho_s(f, g)
            tplus = theta_right_limit(f, rH, g)
            checks += 1
            if not (rH <= rs <= max(tplus, rH) and tplus <= rH + min(distortion(f), distortion(g))):
                return checks, Witness("graph-sup-chain", {
                    "domain": space_spec(X), "codomain": space_spec(Y), "f": list(f.table),
                    "g": list(g.table), "rho_H": fmt(rH), "rho_s": fmt(rs), "theta+": fmt(tplus)})
    # uniform convergence: f_n = g + p^n u converges in both metrics
    for X in cfg.spaces():
        p = _p_of(X)
        for _ in range(max(1, trials // 100)):
            g = gen.random_scalar_function(rng, X, p)
            u = [Fraction(rng.randint(1, p - 1 if p > 2 else 1)) for _ in X.points]
            min_d = min(v for v in X.distance_values() if v > 0)
            prev = None
            for n in range(1, 9):
                fn = ScalarFunction(X, [a + p ** n * b for a, b in zip(g.table, u)], p)
                rs, rH = rho_s(fn, g), rho_H(fn, g)
                checks += 1
                ok = rs == Fraction(1, p ** n) and rH <= rs and (prev is None or rH <= prev)
                if rs < min_d:
                    ok = ok and rH == rs
                if not ok:
                    return checks, Witness("graph-sup-chain", {
                        "space": space_spec(X), "n": n, "rho_s": fmt(rs), "rho_H": fmt(rH)})
                prev = rH
    return checks, None


def suite_map_metrics(cfg, rng, trials):
    checks = 0
    for X, Y in _map_pairs(cfg):
        for _ in range(trials):
            f, g, h = (_maybe_nonexpanding(rng, X, Y) for _ in range(3))
            if rng.coin(1, 4):
                g = f
            uf_g, ug_f, ug_h, uf_h = rho_u(f, g), rho_u(g, f), rho_u(g, h), rho_u(f, h)
            rH, rb, rs = rho_H(f, g), rho_b(f, g), rho_s(f, g)
            checks += 1
            bad = None
            if uf_g != ug_f:
                bad = "rho_u symmetry"
            elif (f.table == g.table) != (uf_g == 0):
                bad = "rho_u identity"
            elif uf_h > max(uf_g, ug_h):
                bad = "rho_u strong triangle"
            elif rH > uf_g:
                bad = "rho_H <= rho_u"
            elif is_nonexpanding(f) and is_nonexpanding(g) and not (rH == uf_g == rs):
                bad = "nonexpanding equality"
            elif rH != rb:
                bad = "rho_H = rho_b"
            else:
                df, dg = dilatation(f), dilatation(g)
                if min(df, dg) >= 1 and rs > min(df, dg) * rH:
                    bad = "rho_s <= min dil * rho_H"
            if bad:
                return checks, Witness("map-metric-comparison", {
                    "domain": space_spec(X), "codomain": space_spec(Y), "f": list(f.table),
                    "g": list(g.table), "h": list(h.table), "law": bad})
    return checks, None


def suite_nonexpanding_graph(cfg, rng, trials):
    checks = 0
    for X in cfg.spaces():
        for _ in range(trials):
            f = gen.random_nonexpanding_map(rng, X)
            g = gen.random_map(rng, X, X)
            if rng.coin():
                f, g = g, f
            checks += 1
            if rho_s(f, g) != rho_H(f, g):
                return checks, Witness("nonexpanding-graph-equality", {
                    "space": space_spec(X), "f": list(f.table), "g": list(g.table)})
    return checks, None


def _ball_models(cfg):
    out = []
    for X in cfg.spaces():
        out.append((enumerate_balls(X), _p_of(X)))
    return out


def _nonexpanding_scalar(rng, bs, p):
    """Selection lifted to scalars on a p-adic quotient, else a constant."""
    base = bs.base
    if base.model == "pquotient":
        n = base.params["n"]
        vals = [rng.choice(b.sorted_members()) + p ** n * gen.random_scalar(rng, p, 0, 1)
                for b in bs.balls]
        return BallMap(bs, ScalarField(p), vals)
    c = gen.random_scalar(rng, p)
    return BallMap(bs, ScalarField(p), [c] * len(bs))


def suite_beta_metric(cfg, rng, trials):
    checks = 0
    lams = cfg.lambda_values()
    for bs, p in _ball_models(cfg):
        for _ in range(trials):
            P1, P2 = gen.random_scalar_pair(rng, bs, p)
            P3 = gen.perturb_ballmap(rng, P2, p) if rng.coin() else gen.random_scalar_ballmap(rng, bs, p)
            if rng.coin(1, 5):
                P3 = P1
            for lam in lams:
                for name, fn in (("beta", beta), ("beta*", beta_star)):
                    ab, ba, bc, ac = fn(lam, P1, P2), fn(lam, P2, P1), fn(lam, P2, P3), fn(lam, P1, P3)
                    checks += 1
                    bad = None
                    if ab != ba:
                        bad = "symmetry"
                    elif (P1.table == P2.table) != (ab == 0):
                        bad = "identity"
                    elif ac > max(ab, bc):
                        bad = "strong triangle"
                    if bad:
                        return checks, Witness("beta-metric-axioms", {
                            "metric": name, "lambda": fmt(lam), "law": bad,
                            "P1": _tab(P1), "P2": _tab(P2), "P3": _tab(P3)})
        for _ in range(2 * trials):
            if rng.coin():
                P1, P2 = gen.random_scalar_pair(rng, bs, p)
            else:
                P1, P2 = gen.random_point_ballmap(rng, bs), gen.random_point_ballmap(rng, bs)
            rs = rho_s(P1.as_point_map(), P2.as_point_map())
            rH = rho_H(P1.as_point_map(), P2.as_point_map())
            for lam in lams:
                b, bst = beta(lam, P1, P2), beta_star(lam, P1, P2)
                checks += 1
                ok = (bst <= rs <= b and rH <= max(Fraction(1), lam) * bst
                      and max(eta(lam, P1), eta(lam, P2)) <= b)
                if ok:
                    scan = beta_scan(lam, P1, P2)
                    for e in (lam and _probe_points(scan)):
                        if (e in scan) != beta_feasible(lam, P1, P2, e):
                            ok = False
                            break
                if not ok:
                    return checks, Witness("beta-metric-axioms", {
                        "lambda": fmt(lam), "law": "comparison chain", "P1": _tab(P1),
                        "P2": _tab(P2), "beta": fmt(b), "beta*": fmt(bst), "rho_s": fmt(rs),
                        "rho_H": fmt(rH)})
            member = [class_membership(lam, P1) for lam in sorted(lams)]
            checks += 1
            if any(later and not earlier for earlier, later in zip(member, member[1:])):
                return checks, Witness("beta-metric-axioms", {
                    "law": "descending class chain", "P1": _tab(P1)})
        for _ in range(2 * trials // 5):
            if rng.coin():
                P1, P2 = gen.selection_ballmap(rng, bs), gen.selection_ballmap(rng, bs)
            else:
                P1, P2 = _nonexpanding_scalar(rng, bs, p), _nonexpanding_scalar(rng, bs, p)
            rs = rho_s(P1.as_point_map(), P2.as_point_map())
            rH = rho_H(P1.as_point_map(), P2.as_point_map())
            checks += 1
            if not (class_membership(1, P1) and class_membership(1, P2)
                    and rH == rs == beta(1, P1, P2) == beta_star(1, P1, P2)):
                return checks, Witness("beta-metric-axioms", {
                    "law": "equalities on the lambda=1 class", "P1": _tab(P1), "P2": _tab(P2)})
        # uniform convergence against a member of the lambda=1 class
        P = _nonexpanding_scalar(rng, bs, p)
        u = [Fraction(rng.randint(1, max(1, p - 1))) for _ in bs.balls]
        prev = None
        for n in range(1, 8):
            Pn = BallMap(bs, P.codomain, [a + p ** n * c for a, c in zip(P.table, u)])
            rs = rho_s(Pn.as_point_map(), P.as_point_map())
            b = beta(1, Pn, P)
            checks += 1
            if b != rs or rs != Fraction(1, p ** n) or (prev is not None and b >= prev):
                return checks, Witness("beta-metric-axioms", {
                    "law": "uniform convergence", "n": n, "beta": fmt(b), "rho_s": fmt(rs)})
            prev = b
    return checks, None


def _probe_points(scan):
    pts = [Fraction(0)] + list(scan.breakpoints)
    out = []
    for a, b in zip(pts, pts[1:]):
        out.append((a + b) / 2)
        out.append(b)
    out.append(pts[-1] + 1)
    for w in scan.worst:
        if w > 0:
            out.append(w)
    return [x for x in out if x > 0]


def suite_beta_monotone(cfg, rng, trials):
    checks = 0
    lams = sorted(cfg.lambda_values())
    for bs, p in _ball_models(cfg):
        for _ in range(trials):
            P1, P2 = gen.random_scalar_pair(rng, bs, p)
            bvals = [beta(l, P1, P2) for l in lams]
            svals = [beta_star(l, P1, P2) for l in lams]
            checks += 1
            if any(b > a for a, b in zip(bvals[1:], bvals)) or \
                    any(b < a for a, b in zip(svals[1:], svals)):
                return checks, Witness("beta-lambda-monotone", {
                    "lambdas": [fmt(l) for l in lams], "beta": [fmt(v) for v in bvals],
                    "beta*": [fmt(v) for v in svals], "P1": _tab(P1), "P2": _tab(P2)})
            for lam, b in zip(lams, bvals):
                br = grid_beta(lam, P1, P2)
                checks += 1
                if not br.contains(b):
                    return checks, Witness("beta-lambda-monotone", {
                        "lambda": fmt(lam), "beta": fmt(b), "bracket": [fmt(br.lo), fmt(br.hi)],
                        "P1": _tab(P1), "P2": _tab(P2)})
    return checks, None


def _distinct_pair(rng, bs, p):
    while True:
        if rng.coin(1, 6):
            c1, c2 = gen.random_scalar(rng, p), gen.random_scalar(rng, p)
            P1 = BallMap(bs, ScalarField(p), [c1] * len(bs))
            P2 = BallMap(bs, ScalarField(p), [c2] * len(bs))
        else:
            P1, P2 = gen.random_scalar_pair(rng, bs, p)
        if P1.table != P2.table:
            return P1, P2


def suite_h_functionals(cfg, rng, trials):
    checks = 0
    for bs, p in _ball_models(cfg):
        for _ in range(trials):
            P1, P2 = _distinct_pair(rng, bs, p)
            h = h_functionals(P1, P2)
            lim = beta_limits(P1, P2)
            rs = rho_s(P1.as_point_map(), P2.as_point_map())
            checks += 1
            if not (max(lim.beta_inf, h.H1, h.H2) == h.H12 == max(rs, h.H1, h.H2)):
                return checks, Witness("h-functional-identities", {
                    "P1": _tab(P1), "P2": _tab(P2), "H12": fmt(h.H12), "H1": fmt(h.H1),
                    "H2": fmt(h.H2), "beta_inf": fmt(lim.beta_inf), "rho_s": fmt(rs)})
            # every finite map is Lipschitz, so its admissible degree vanishes
            if admissibility(P1).d_a != 0 or admissibility(P2).d_a != 0:
                return checks, Witness("h-functional-identities", {
                    "law": "Lipschitz maps have admissible degree 0", "P1": _tab(P1)})
            d = P1.codomain.dist
            hyp = all(len({d(P1(c), P2(c)) for c in bs.chain_members(i)}) > 1
                      for i in range(len(bs)))
            if hyp and max(h.H1, h.H2) != h.H12:
                return checks, Witness("h-functional-identities", {
                    "law": "distinct-values hypothesis", "P1": _tab(P1), "P2": _tab(P2)})
    return checks, None


def suite_beta_limits(cfg, rng, trials):
    checks = 0
    for bs, p in _ball_models(cfg):
        for _ in range(trials):
            P1, P2 = _distinct_pair(rng, bs, p)
            lim = beta_limits(P1, P2)
            rs = rho_s(P1.as_point_map(), P2.as_point_map())
            om = omega_functionals(P1, P2, rs)
            da = max(admissibility(P1).d_a, admissibility(P2).d_a)
            checks += 1
            bad = None
            if (lim.beta0 == rs) != (da <= rs) or lim.beta0 != rs or da != 0:
                bad = "beta^0 = rho_s iff d_a <= rho_s"
            elif lim.beta_inf != om.omega_hat:
                bad = "beta^inf = Omega-hat"
            elif lim.beta_star0 != rs:
                bad = "beta*^0 = rho_s"
            elif lim.beta_star_inf != om.omega_hat_star:
                bad = "beta*^inf = Omega-hat*"
            if bad:
                return checks, Witness("beta-limit-identities", {
                    "law": bad, "P1": _tab(P1), "P2": _tab(P2), "limits": [
                        fmt(lim.beta0), fmt(lim.beta_inf), fmt(lim.beta_star0),
                        fmt(lim.beta_star_inf)], "omega_hat": fmt(om.omega_hat),
                    "omega_hat_star": fmt(om.omega_hat_star), "rho_s": fmt(rs)})
    return checks, None


def suite_corollaries(cfg, rng, trials):
    checks = 0
    lams = cfg.lambda_values()
    for bs, p in _ball_models(cfg):
        for _ in range(trials):
            P1, P2 = _distinct_pair(rng, bs, p)
            lim = beta_limits(P1, P2)
            rs = rho_s(P1.as_point_map(), P2.as_point_map())
            h = h_functionals(P1, P2)
            checks += 1
            if lim.beta0 != rs:
                return checks, Witness("beta-limit-corollaries", {
                    "law": "Lipschitz pair: beta^0 = rho_s", "P1": _tab(P1), "P2": _tab(P2)})
            if max(h.H1, h.H2) < h.H12:
                vals = {beta(l, P1, P2) for l in lams} | {lim.beta0, rs, h.H12}
                if len(vals) != 1:
                    return checks, Witness("beta-limit-corollaries", {
                        "law": "strict H gap forces all equal", "P1": _tab(P1), "P2": _tab(P2)})
            da = max(admissibility(P1).d_a, admissibility(P2).d_a)
            if da > rs and max(h.H1, h.H2) != h.H12:
                return checks, Witness("beta-limit-corollaries", {
                    "law": "admissible degree above rho_s", "P1": _tab(P1), "P2": _tab(P2)})
    return checks, None


def suite_chain_map(cfg, rng, trials):
    checks = 0
    pairs = [(Fraction(1, 2), Fraction(10)), (Fraction(8), Fraction(1))]
    while len(pairs) < trials:
        pairs.append((Fraction(rng.randint(1, 40), rng.randint(1, 40)),
                      Fraction(rng.randint(1, 60), rng.randint(1, 12))))
    for delta, eps in pairs[:trials]:
        w = example48(delta, eps)
        checks += 1
        r = w.r
        is_power = r.numerator == 1 and _is_power(r.denominator, 3)
        if not (w.holds and w.rho_s == 2 and is_power and r < min(delta, 1 / delta, 1 / eps)
                and w.distance == 1 / r > eps):
            return checks, Witness("non-admissible-chain-map", {
                "delta": fmt(delta), "eps": fmt(eps), "r": fmt(r), "distance": fmt(w.distance),
                "rho_s": fmt(w.rho_s)})
    return checks, None


def _is_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _chain_scalar_pairs(rng, dom, p, count):
    out = []
    for _ in range(count):
        t1 = [gen.random_scalar(rng, p) for _ in range(len(dom))]
        t2 = list(t1)
        for i in rng.sample(range(len(dom)), rng.randint(1, len(dom))):
            t2[i] = gen.random_scalar(rng, p)
        out.append((BallMap(dom, ScalarField(p), t1), BallMap(dom, ScalarField(p), t2)))
    return out


def suite_dilation(cfg, rng, trials):
    checks = 0
    p = 3
    dom = CpBallDomain(p, [Fraction(p) ** k for k in range(-4, 5)])
    factors = [Fraction(3), Fraction(1, 3), Fraction(2), Fraction(-1)]
    for P1, P2 in _chain_scalar_pairs(rng, dom, p, trials):
        for a in factors:
            s = padic_abs(a, p)
            Q1, Q2 = scale_domain(P1, a, strict=False), scale_domain(P2, a, strict=False)
            qdom = Q1.ball_domain
            image = [dom.index_of_radius(s * r) for r in qdom.radii]
            for e in list(qdom.radii) + [qdom.radii[0] / 2]:
                left = beta_feasible(s, P1, P2, e, balls=image)
                right = beta_feasible(1, Q1, Q2, e)
                checks += 1
                if left != right:
                    return checks, Witness("dilation-transport", {
                        "form": "domain", "a": fmt(a), "eps": fmt(e),
                        "P1": _tab(P1), "P2": _tab(P2)})
            A1, A2 = scale_range(P1, a), scale_range(P2, a)
            for e in [r / s for r in dom.radii] + [dom.radii[0] / (2 * s)]:
                left = beta_feasible(s, P1, P2, e)
                right = beta_feasible(1, A1, A2, s * e)
                checks += 1
                if left != right:
                    return checks, Witness("dilation-transport", {
                        "form": "range", "a": fmt(a), "eps": fmt(e),
                        "P1": _tab(P1), "P2": _tab(P2)})
        if scale_domain(P1, Fraction(2)).table != P1.table:
            return checks, Witness("dilation-transport", {"form": "unit", "P1": _tab(P1)})
    # exact infima on a p-adic quotient
    bs = enumerate_balls(pquotient(3, 2))
    for _ in range(max(1, trials // 5)):
        P1, P2 = gen.random_scalar_pair(rng, bs, 3)
        for a in factors:
            s = padic_abs(a, 3)
            checks += 1
            if beta(s, P1, P2) != beta(1, scale_range(P1, a), scale_range(P2, a)) / s:
                return checks, Witness("dilation-transport", {
                    "form": "range infimum", "a": fmt(a), "P1": _tab(P1), "P2": _tab(P2)})
            if s == 1 and beta(1, scale_domain(P1, a), scale_domain(P2, a)) != beta(1, P1, P2):
                return checks, Witness("dilation-transport", {
                    "form": "domain infimum", "a": fmt(a), "P1": _tab(P1), "P2": _tab(P2)})
    return checks, None


def suite_bl(cfg, rng, trials):
    checks = 0
    X = pquotient(3, 2)
    p = 3
    zero = ScalarFunction(X, [0] * len(X), p)
    for _ in range(trials):
        f, g = gen.random_scalar_function(rng, X, p), gen.random_scalar_function(rng, X, p)
        a = gen.random_scalar(rng, p, zero_odds=10)
        nf, ng = bl_norm(f), bl_norm(g)
        checks += 1
        bad = None
        if bl_norm(bl_add(f, g)) > max(nf, ng):
            bad = "ultrametric sum"
        elif bl_norm(bl_scale(a, f)) != padic_abs(a, p) * nf:
            bad = "homogeneity"
        elif (nf == 0) != (f.table == zero.table):
            bad = "positivity"
        elif bl_norm(bl_mul(f, g)) > nf * ng:
            bad = "submultiplicativity"
        if bad:
            return checks, Witness("bl-norm-algebra", {
                "law": bad, "f": [fmt(v) for v in f.table], "g": [fmt(v) for v in g.table],
                "a": fmt(a)})
    return checks, None


def suite_dudley(cfg, rng, trials):
    checks = 0
    p, N, mv = 2, 2, 3
    d0, d2 = make_measure("dirac", p, N, a=0), make_measure("dirac", p, N, a=2)
    top = dudley(d0, d2, "exact_small", mv)
    checks += 1
    if top.exact != Fraction(1, 2) or exhaustive_dudley(p, N, mv, d0, d2) != Fraction(1, 2):
        return checks, Witness("dudley-metric-axioms", {"pair": "dirac(0), dirac(2)",
                                                        "exact": fmt(top.exact)})
    mus = gen.small_measures(p, N, trials, rng)
    D = {}
    for i, j in itertools.combinations_with_replacement(range(len(mus)), 2):
        b = dudley(mus[i], mus[j], "exact_small", mv)
        D[i, j] = D[j, i] = b.exact
        checks += 1
        if not (b.lower <= b.exact <= b.upper) or ((i == j) != (b.exact == 0)):
            return checks, Witness("dudley-metric-axioms", {
                "law": "bounds/identity", "mu1": list(map(fmt, mus[i].atoms)),
                "mu2": list(map(fmt, mus[j].atoms))})
    for i, j in list(itertools.combinations(range(len(mus)), 2))[:20]:
        checks += 1
        if dudley(mus[j], mus[i], "exact_small", mv).exact != D[i, j]:
            return checks, Witness("dudley-metric-axioms", {"law": "symmetry", "pair": [i, j]})
    for i, j in list(itertools.combinations(range(len(mus)), 2))[:4]:
        checks += 1
        if exhaustive_dudley(p, N, mv, mus[i], mus[j]) != D[i, j]:
            return checks, Witness("dudley-metric-axioms", {"law": "oracle agreement", "pair": [i, j]})
    for i, j, k in itertools.product(range(len(mus)), repeat=3):
        checks += 1
        if D[i, k] > max(D[i, j], D[j, k]):
            return checks, Witness("dudley-metric-axioms", {
                "law": "strong triangle", "measures": [list(map(fmt, mus[x].atoms)) for x in (i, j, k)]})
    return checks, None


def _panel(p, N):
    fs = [indicator(p, N, k, 0) for k in range(1, N + 1)]
    fs.append(TestFunction(p, N, list(range(p ** N))))
    return fs


def suite_integrals(cfg, rng, trials):
    checks = 0
    for p, N in ((2, 3), (3, 2)):
        for _ in range(trials):
            mu = make_measure("random", p, N, seed=rng.next_u64())
            for k, a in mu.balls():
                checks += 1
                if integrate_step(indicator(p, N, k, a), mu) != mu.value(k, a):
                    return checks, Witness("integral-convergence", {
                        "law": "indicator integral", "ball": [k, a], "atoms": list(map(fmt, mu.atoms))})
            M = rng.randint(1, N)
            f = TestFunction(p, M, [gen.random_scalar(rng, p) for _ in range(p ** M)])
            checks += 1
            if padic_abs(integrate_step(f, mu), p) > f.sup_norm() * measure_norm(mu):
                return checks, Witness("integral-convergence", {"law": "norm estimate"})
            approx, err = integrate_with_modulus(lambda x: f(x), mu, 0)
            if err != 0 or approx != integrate_step(f, mu):
                return checks, Witness("integral-convergence", {"law": "locally constant Riemann sum"})
            nu = make_measure("random", p, N, seed=rng.next_u64())
            for n in range(1, 6):
                mun = mu + nu.scale(Fraction(p) ** n)
                gap = padic_abs(integrate_step(f, mun) - integrate_step(f, mu), p)
                checks += 1
                if gap > f.sup_norm() * measure_norm(nu) / p ** n:
                    return checks, Witness("integral-convergence", {"law": "perturbation", "n": n})
    return checks, None


def suite_measure_convergence(cfg, rng, trials):
    checks = 0
    for p, N in ((2, 3), (3, 2)):
        zero = make_measure("table", p, N, atoms=[0] * p ** N)
        for _ in range(trials):
            nu = make_measure("random", p, N, seed=rng.next_u64())
            rep = convergence_analyzer(lambda n: nu.scale(Fraction(p) ** n), zero, _panel(p, N), 12)
            checks += 1
            if rep.verdict != "PASS":
                return checks, Witness("measure-convergence", {
                    "atoms": list(map(fmt, nu.atoms)), "failures": rep.failures})
        mu = make_measure("random", p, N, seed=rng.next_u64())
        rep = convergence_analyzer(lambda n: mu, mu, _panel(p, N), 4)
        checks += 1
        if rep.verdict != "PASS" or any(v != 0 for row in rep.rows for v in row[1:-1]):
            return checks, Witness("measure-convergence", {"law": "constant sequence"})
    return checks, None


CLAIMS = (
    ("ball-hausdorff-formula", suite_ball_formula),
    ("disjoint-ball-criterion", suite_disjoint_balls),
    ("neighborhood-calculus", suite_neighbourhood),
    ("hausdorff-strong-triangle", suite_hausdorff_triangle),
    ("ball-space-tower", suite_ball_tower),
    ("diameter-functional", suite_diameter_functional),
    ("graph-sup-chain", suite_graph_sup_chain),
    ("map-metric-comparison", suite_map_metrics),
    ("nonexpanding-graph-equality", suite_nonexpanding_graph),
    ("beta-metric-axioms", suite_beta_metric),
    ("beta-lambda-monotone", suite_beta_monotone),
    ("h-functional-identities", suite_h_functionals),
    ("beta-limit-identities", suite_beta_limits),
    ("beta-limit-corollaries", suite_corollaries),
    ("non-admissible-chain-map", suite_chain_map),
    ("dilation-transport", suite_dilation),
    ("bl-norm-algebra", suite_bl),
    ("dudley-metric-axioms", suite_dudley),
    ("integral-convergence", suite_integrals),
    ("measure-convergence", suite_measure_convergence),
)

CLAIM_IDS = tuple(c for c, _ in CLAIMS)
_SUITES = dict(CLAIMS)

DEFAULT_TRIALS = {
    "ball-hausdorff-formula": 100,
    "disjoint-ball-criterion": 50,
    "neighborhood-calculus": 50,
    "hausdorff-strong-triangle": 200,
    "ball-space-tower": 1,
    "diameter-functional": 50,
    "graph-sup-chain": 100,
    "map-metric-comparison": 100,
    "nonexpanding-graph-equality": 100,
    "beta-metric-axioms": 30,
    "beta-lambda-monotone": 50,
    "h-functional-identities": 50,
    "beta-limit-identities": 50,
    "beta-limit-corollaries": 50,
    "non-admissible-chain-map": 20,
    "dilation-transport": 10,
    "bl-norm-algebra": 200,
    "dudley-metric-axioms": 8,
    "integral-convergence": 5,
    "measure-convergence": 2,
}


@dataclass
class ClaimResult:
    claim: str
    trials: int
    checks: int
    witness: Witness = None

    @property
    def ok(self):
        return self.witness is None


def run_claim(claim, cfg, trials=None):
    trials = cfg.trials_for(claim) if trials is None else trials
    rng = XorShift64Star(claim_seed(cfg.seed, claim))
    suite = _SUITES[claim]
    try:
        if cfg.inject_fault:
            with inject_fault(cfg.inject_fault):
                checks, w = suite(cfg, rng, trials)
        else:
            checks, w = suite(cfg, rng, trials)
    except Exception as exc:
        # a construction that raises mid-suite is a failed claim, not a crash
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "witness", None) is not None:
            payload["witness"] = exc.witness
        return ClaimResult(claim, trials, 0, Witness(claim, payload))
    return ClaimResult(claim, trials, checks, w)


def _job(args):
    claim, cfg = args
    return run_claim(claim, cfg)


def run_verify(cfg, claims=None):
    """Run every claim with a positive trial count, in claim order."""
    todo = [c for c in (claims or CLAIM_IDS) if cfg.trials_for(c) > 0]
    if cfg.workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            results = list(ex.map(_job, [(c, cfg) for c in todo]))
    else:
        results = [run_claim(c, cfg) for c in todo]
    return results


def report_doc(cfg, results, witness_paths=None):
    witness_paths = witness_paths or {}
    rows = []
    for r in results:
        rows.append({"claim": r.claim, "trials": r.trials, "checks": r.checks,
                     "result": "pass" if r.ok else "fail",
                     "witness": witness_paths.get(r.claim),
                     "detail": None if r.ok else r.witness.to_doc()})
    return {"schema": SCHEMA, "kind": "verify-report", "seed": str(cfg.seed),
            "claims": rows, "passed": all(r.ok for r in results)}


def report_csv(doc):
    lines = ["claim,trials,checks,result,witness"]
    for row in doc["claims"]:
        lines.append(f"{row['claim']},{row['trials']},{row['checks']},{row['result']},"
                     f"{row['witness'] or ''}")
    return "\n".join(lines) + "\n"


def write_witnesses(results, out):
    paths = {}
    for r in results:
        if not r.ok:
            path = os.path.join(out, f"witness-{r.claim}.json")
            with open(path, "w") as fh:
                json.dump({"schema": SCHEMA, **r.witness.to_doc()}, fh, indent=2, sort_keys=True)
                fh.write("\n")
            paths[r.claim] = path
    return paths
