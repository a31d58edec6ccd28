"""Brute-force references written straight from the definitions. None of
this code shares breakpoint logic with the optimised modules."""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Verdict
from .maps import codomain_dist
from .prng import XorShift64Star
from .rational import fmt, padic_abs, rat


@dataclass
class Witness:
    claim: str
    payload: dict
    trace: list = field(default_factory=list)

    def to_doc(self):
        return {"claim": self.claim, "payload": self.payload, "trace": self.trace}


def _inside_neighbourhood(space, A, B, eps):
    """A subset of {x : dist(x, B) < eps}?"""
    for a in A:
        if not any(space.d(a, b) < eps for b in B):
            return False
    return True


def brute_hausdorff(space, A, B):
    """inf {eps > 0 : A in U_eps(B) and B in U_eps(A)} by probing every
    attained distance and the midpoints between them."""
    A, B = sorted(set(A)), sorted(set(B))
    if not A or not B:
        raise ValueError("sets must be nonempty")
    vals = sorted({space.d(x, y) for x in space.points for y in space.points})
    # min distance from each point to the other set, via the definition
    probes = []
    for lo, hi in zip(vals, vals[1:]):
        probes.append(((lo + hi) / 2, lo))
        probes.append((hi, hi))
    probes.append((vals[-1] + 1, vals[-1]))
    for eps, inf_value in probes:
        if _inside_neighbourhood(space, A, B, eps) and _inside_neighbourhood(space, B, A, eps):
            return inf_value
    raise AssertionError("unreachable: the whole space is within any eps above the diameter")


@dataclass(frozen=True)
class GridBracket:
    lo: Fraction
    hi: Fraction
    grid: tuple

    def contains(self, v):
        return self.lo <= v <= self.hi


def _grid(points, density):
    pts = sorted(set(points))
    out = set(pts)
    for a, b in zip(pts, pts[1:]):
        for k in range(1, density + 1):
            out.add(a + (b - a) * k / (density + 1))
    top = pts[-1]
    out.add(top + 1)
    out.add(2 * top + 1)
    return sorted(x for x in out if x > 0)


def beta_grid_points(lam, P1, P2, density=2):
    lam = rat(lam)
    base = P1.ball_domain.base
    dist = codomain_dist(P1.codomain)
    vals = list(dict.fromkeys(list(P1.table) + list(P2.table)))
    ys = {dist(u, v) for u in vals for v in vals}
    xs = {base.d(a, b) for a in base.points for b in base.points}
    return _grid([Fraction(0)] + list(ys) + [x / lam for x in xs], density)


def beta_condition(lam, P1, P2, eps):
    """The defining predicate, with U_delta(B) built from the point set."""
    bs = P1.ball_domain
    base = bs.base
    dist = codomain_dist(P1.codomain)
    r = rat(lam) * rat(eps)
    for i, b in enumerate(bs.balls):
        hood = frozenset(x for x in base.points if min(base.d(x, y) for y in b.members) < r)
        k = bs.index_of(hood)
        if dist(P1(i), P2(k)) > eps or dist(P2(i), P1(k)) > eps:
            return False
    return True


def grid_beta(lam, P1, P2, density=2):
    """[largest infeasible grid eps below the first feasible one, first
    feasible grid eps]; beta must lie inside."""
    grid = beta_grid_points(lam, P1, P2, density)
    if P1.table == P2.table:
        return GridBracket(Fraction(0), grid[0], tuple(grid))
    lo = Fraction(0)
    for eps in grid:
        if beta_condition(lam, P1, P2, eps):
            return GridBracket(lo, eps, tuple(grid))
        lo = eps
    raise AssertionError("no feasible grid point above every distance")


def exhaustive_dudley(p, N, mv, mu1, mu2):
    """max |sum f(c) (mu1 - mu2)(c)| over every f : Z/p^N -> {0..p^mv - 1}
    with sup norm <= 1 and dilatation <= 1."""
    if p ** N > 4 or mv > 3:
        raise ValueError("exhaustive Dudley is limited to p^N <= 4 and M_v <= 3")
    size = p ** N
    nu = [rat(a) - rat(b) for a, b in zip(mu1.atoms, mu2.atoms)]
    best = Fraction(0)
    for f in itertools.product(range(p ** mv), repeat=size):
        if any(padic_abs(v, p) > 1 for v in f):
            continue
        ok = True
        for a in range(size):
            for b in range(a + 1, size):
                if padic_abs(f[a] - f[b], p) > padic_abs(a - b, p):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        v = padic_abs(sum(fc * w for fc, w in zip(f, nu)), p)
        if v > best:
            best = v
    return best


def metric_axiom_suite(points, dist, strong=True, max_triples=10 ** 4, seed=0, label=repr):
    """Identity, positivity, symmetry and (strong) triangle; all triples when
    there are at most max_triples, otherwise a seeded sample."""
    pts = list(points)
    n = len(pts)
    cache = {}

    def d(i, j):
        key = (i, j)
        if key not in cache:
            cache[key] = dist(pts[i], pts[j])
        return cache[key]

    for i in range(n):
        if d(i, i) != 0:
            return Verdict(False, {"kind": "identity", "points": [label(pts[i])],
                                   "value": fmt(d(i, i))})
    for i in range(n):
        for j in range(i + 1, n):
            a, b = d(i, j), d(j, i)
            if a != b:
                return Verdict(False, {"kind": "symmetry", "points": [label(pts[i]), label(pts[j])],
                                       "values": [fmt(a), fmt(b)]})
            if a <= 0:
                return Verdict(False, {"kind": "positivity", "points": [label(pts[i]), label(pts[j])],
                                       "value": fmt(a)})
    if n ** 3 <= max_triples:
        triples = itertools.product(range(n), repeat=3)
    else:
        rng = XorShift64Star(seed)
        triples = [(rng.below(n), rng.below(n), rng.below(n)) for _ in range(max_triples)]
    for x, y, z in triples:
        lhs = d(x, z)
        rhs = max(d(x, y), d(y, z)) if strong else d(x, y) + d(y, z)
        if lhs > rhs:
            return Verdict(False, {"kind": "strong-triangle" if strong else "triangle",
                                   "points": [label(pts[x]), label(pts[y]), label(pts[z])],
                                   "values": [fmt(d(x, y)), fmt(d(y, z)), fmt(lhs)]})
    return Verdict(True, None)
