"""Seeded generators for spaces, maps, ball maps and small measures."""

from fractions import Fraction

from .ballmaps import BallMap
from .core import all_balls, explicit_space
from .maps import PointMap, ScalarField, ScalarFunction
from .measures import LevelMeasure

_SHRINK = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(3, 4))


def random_ultrametric(rng, n_min=2, n_max=7):
    """Explicit ultrametric from a random dendrogram with exact heights."""
    n = rng.randint(n_min, n_max)
    d = [[Fraction(0)] * n for _ in range(n)]

    def split(pts, height):
        if len(pts) < 2:
            return
        k = rng.randint(2, min(3, len(pts)))
        rng.shuffle(pts)
        cuts = sorted(rng.sample(range(1, len(pts)), k - 1))
        parts = [pts[a:b] for a, b in zip([0] + cuts, cuts + [len(pts)])]
        for i, A in enumerate(parts):
            for B in parts[i + 1:]:
                for x in A:
                    for y in B:
                        d[x][y] = d[y][x] = height
        for A in parts:
            split(list(A), height * rng.choice(_SHRINK))

    split(list(range(n)), Fraction(rng.randint(1, 4)))
    return explicit_space([chr(97 + i) if n <= 26 else str(i) for i in range(n)], d)


def random_non_ultrametric(rng, n_min=3, n_max=7):
    """Explicit metric with integer distances in [k, 2k] (always a metric),
    redrawn until the strong triangle fails."""
    while True:
        n = rng.randint(n_min, n_max)
        k = rng.randint(2, 5)
        d = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d[i][j] = d[j][i] = Fraction(rng.randint(k, 2 * k), rng.randint(1, 3))
        # rescaling per pair could break the triangle; validate and retry
        try:
            s = explicit_space([chr(97 + i) for i in range(n)], d)
        except ValueError:
            continue
        if not s.is_ultrametric:
            return s


def random_map(rng, X, Y):
    return PointMap(X, Y, [rng.below(len(Y)) for _ in X.points])


def random_nonexpanding_map(rng, X):
    """x -> a fixed representative of the closed ball of radius r around x."""
    vals = X.distance_values()
    r = rng.choice(vals)
    rep = {}
    table = []
    for x in X.points:
        key = frozenset(y for y in X.points if X.d(x, y) <= r)
        if key not in rep:
            rep[key] = rng.choice(sorted(key))
        table.append(rep[key])
    return PointMap(X, X, table)


def random_scalar(rng, p, vmin=-1, vmax=2, zero_odds=3):
    if rng.below(zero_odds) == 0:
        return Fraction(0)
    unit = rng.randint(1, p * p)
    while unit % p == 0:
        unit += 1
    if rng.coin():
        unit = -unit
    return unit * Fraction(p) ** rng.randint(vmin, vmax)


def random_scalar_function(rng, X, p):
    return ScalarFunction(X, [random_scalar(rng, p) for _ in X.points], p)


def space_prime(X):
    return X.params.get("p", 2)


def random_scalar_ballmap(rng, bs, p):
    return BallMap(bs, ScalarField(p), [random_scalar(rng, p) for _ in bs.balls])


def perturb_ballmap(rng, P, p, changes=None):
    """P with a few entries redrawn (keeps pairs close, chains interesting)."""
    table = list(P.table)
    k = changes if changes is not None else rng.randint(1, max(1, len(table) // 3))
    for i in rng.sample(range(len(table)), k):
        table[i] = random_scalar(rng, p)
    return BallMap(P.ball_domain, P.codomain, table)


def random_scalar_pair(rng, bs, p):
    P1 = random_scalar_ballmap(rng, bs, p)
    if rng.coin():
        return P1, perturb_ballmap(rng, P1, p)
    return P1, random_scalar_ballmap(rng, bs, p)


def selection_ballmap(rng, bs):
    """P(B) = some member of B; nonexpanding into the base space."""
    return BallMap(bs, bs.base, [rng.choice(b.sorted_members()) for b in bs.balls])


def random_point_ballmap(rng, bs):
    return BallMap(bs, bs.base, [rng.below(len(bs.base)) for _ in bs.balls])


def random_subset(rng, pool):
    pool = sorted(pool)
    k = rng.randint(1, len(pool))
    return frozenset(rng.sample(pool, k))


def small_measures(p, level, count, rng):
    """Distinct measures with atoms in {0, +-1, +-2, +-1/2}."""
    choices = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2)]
    seen = set()
    out = []
    while len(out) < count:
        atoms = tuple(rng.choice(choices) for _ in range(p ** level))
        if atoms not in seen:
            seen.add(atoms)
            out.append(LevelMeasure(p, level, atoms))
    return out
