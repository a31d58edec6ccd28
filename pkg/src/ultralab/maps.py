"""Metrics on maps between finite ultrametric spaces: graph Hausdorff,
uniform, ball and uniform-delta distances, moduli of continuity, distortion,
dilatation, and the BL norm on scalar-valued functions."""

from dataclasses import dataclass
from fractions import Fraction

from .core import UltraSpace
from .rational import PAdicAbsParams, padic_abs, rat
from .scan import probes, scan_infimum


class ScalarField:
    """The coefficient field Q with a p-adic absolute value, used as codomain."""

    def __init__(self, p):
        self.params = PAdicAbsParams(p)
        self.p = p

    def dist(self, u, v):
        return padic_abs(u - v, self.params)

    def abs(self, u):
        return padic_abs(u, self.params)

    def __eq__(self, other):
        return isinstance(other, ScalarField) and other.p == self.p

    def __hash__(self):
        return hash(("scalar", self.p))

    def __repr__(self):
        return f"ScalarField(p={self.p})"


def codomain_dist(cod):
    if isinstance(cod, UltraSpace):
        return cod.d
    return cod.dist


def value_distances(cod, values):
    """All distances attained among a collection of codomain values."""
    dist = codomain_dist(cod)
    vals = list(dict.fromkeys(values))
    return {dist(u, v) for u in vals for v in vals}


class PointMap:
    """A total table from domain points to codomain values."""

    def __init__(self, domain, codomain, table):
        self.domain = domain
        self.codomain = codomain
        table = tuple(table)
        if len(table) != len(domain):
            raise ValueError("map table must be total on the domain")
        if isinstance(codomain, UltraSpace):
            for y in table:
                if not (isinstance(y, int) and 0 <= y < len(codomain)):
                    raise ValueError(f"value {y!r} is not a codomain point")
        else:
            table = tuple(rat(y) for y in table)
        self.table = table

    def __call__(self, x):
        return self.table[x]

    def __eq__(self, other):
        return (isinstance(other, PointMap) and self.table == other.table
                and self.domain == other.domain and self.codomain == other.codomain)

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"PointMap({list(self.table)})"


class ScalarFunction(PointMap):
    """A map into Q measured with |.|_p."""

    def __init__(self, domain, values, p):
        super().__init__(domain, ScalarField(p), values)

    @property
    def p(self):
        return self.codomain.p


def _same_shape(f, g):
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ValueError("maps must share domain and codomain")


def product_sup_dist(X, Y, a, b):
    """max(d_X(x1, x2), d_Y(y1, y2)) for a = (x1, y1), b = (x2, y2)."""
    dy = codomain_dist(Y)
    return max(X.d(a[0], b[0]), dy(a[1], b[1]))


def graph(f):
    return [(x, f(x)) for x in f.domain.points]


def _directed_graph_dist(f, g):
    X = f.domain
    dy = codomain_dist(f.codomain)
    pts = list(X.points)
    worst = Fraction(0)
    for x in pts:
        fx = f(x)
        row = X.matrix[x]
        best = min(max(row[x2], dy(fx, g(x2))) for x2 in pts)
        if best > worst:
            worst = best
    return worst


def rho_H(f, g):
    """Hausdorff distance between the graphs under the sup metric."""
    _same_shape(f, g)
    return max(_directed_graph_dist(f, g), _directed_graph_dist(g, f))


def rho_s(f, g):
    """sup_x d_Y(f(x), g(x))."""
    _same_shape(f, g)
    dy = codomain_dist(f.codomain)
    return max(dy(f(x), g(x)) for x in f.domain.points)


def _candidates(f, g):
    cands = set(f.domain.distance_values())
    cands |= value_distances(f.codomain, list(f.table) + list(g.table))
    return cands


def _ball_condition(f, g, eps):
    X = f.domain
    dy = codomain_dist(f.codomain)
    pts = list(X.points)
    for x in pts:
        row = X.matrix[x]
        near = [x2 for x2 in pts if row[x2] < eps]
        if not any(dy(f(x), g(x2)) < eps for x2 in near):
            return False
        if not any(dy(g(x), f(x2)) < eps for x2 in near):
            return False
    return True


def rho_b(f, g):
    """inf eps with dist(f(x), g(B_x(eps))) < eps and symmetrically, all x."""
    _same_shape(f, g)
    return scan_infimum(lambda e: _ball_condition(f, g, e), _candidates(f, g))


def _uniform_sup(f, g, delta):
    X = f.domain
    dy = codomain_dist(f.codomain)
    worst = Fraction(0)
    for x in X.points:
        row = X.matrix[x]
        for x2 in X.points:
            if row[x2] < delta:
                v = max(dy(f(x), g(x2)), dy(g(x), f(x2)))
                if v > worst:
                    worst = v
    return worst


def rho_u(f, g):
    """inf eps admitting a delta > 0 with d_Y(f(x), g(x')) <= eps and
    d_Y(g(x), f(x')) <= eps whenever d_X(x, x') < delta."""
    _same_shape(f, g)
    if f.table == g.table:
        return Fraction(0)
    # smallest worst case over delta-probes; smaller delta never hurts
    best = min(_uniform_sup(f, g, delta)
               for delta, _ in probes(f.domain.distance_values()))
    return scan_infimum(lambda e: best <= e, _candidates(f, g))


@dataclass(frozen=True)
class ModulusProfile:
    """theta on (breakpoints[i], breakpoints[i+1]] equals values[i]; the last
    interval is unbounded. breakpoints[0] = 0."""
    breakpoints: tuple
    values: tuple

    def __call__(self, eps):
        eps = rat(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        k = 0
        for i, b in enumerate(self.breakpoints):
            if b < eps:
                k = i
        return self.values[k]

    def right_limit(self, a):
        """theta just above a."""
        a = rat(a)
        if a < 0:
            raise ValueError("a must be >= 0")
        k = 0
        for i, b in enumerate(self.breakpoints):
            if b <= a:
                k = i
        return self.values[k]

    def pointwise_min(self, other):
        bps = tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))
        vals = tuple(min(self.right_limit(b), other.right_limit(b)) for b in bps)
        return ModulusProfile(bps, vals)


def modulus_profile(f):
    X = f.domain
    dy = codomain_dist(f.codomain)
    bps = X.distance_values()  # starts at 0
    vals = []
    for b in bps:
        worst = Fraction(0)
        for x in X.points:
            row = X.matrix[x]
            for x2 in X.points:
                if row[x2] <= b:
                    v = dy(f(x), f(x2))
                    if v > worst:
                        worst = v
        vals.append(worst)
    return ModulusProfile(tuple(bps), tuple(vals))


def theta(f, eps, g=None):
    """theta_f(eps), or theta_{f,g}(eps) = min of both when g is given."""
    v = modulus_profile(f)(eps)
    if g is not None:
        v = min(v, modulus_profile(g)(eps))
    return v


def theta_right_limit(f, a, g=None):
    v = modulus_profile(f).right_limit(a)
    if g is not None:
        v = min(v, modulus_profile(g).right_limit(a))
    return v


def _pairs(X):
    pts = list(X.points)
    for i, x in enumerate(pts):
        for x2 in pts[i + 1:]:
            yield x, x2


def distortion(f):
    X = f.domain
    dy = codomain_dist(f.codomain)
    return max((abs(dy(f(a), f(b)) - X.d(a, b)) for a, b in _pairs(X)),
               default=Fraction(0))


def dilatation(f):
    X = f.domain
    dy = codomain_dist(f.codomain)
    return max((dy(f(a), f(b)) / X.d(a, b) for a, b in _pairs(X)),
               default=Fraction(0))


def is_nonexpanding(f):
    return dilatation(f) <= 1


# ---------------------------------------------------------------- BL algebra

def sup_norm(f):
    return max(f.codomain.abs(v) for v in f.table)


def bl_norm(f):
    """max(sup norm, dilatation)."""
    if not isinstance(f.codomain, ScalarField):
        raise TypeError("BL norm needs a scalar-valued function")
    return max(sup_norm(f), dilatation(f))


def _scalar_pair(f, g):
    _same_shape(f, g)
    if not isinstance(f.codomain, ScalarField):
        raise TypeError("ring operations need scalar-valued functions")


def bl_add(f, g):
    _scalar_pair(f, g)
    return ScalarFunction(f.domain, [a + b for a, b in zip(f.table, g.table)], f.codomain.p)


def bl_mul(f, g):
    _scalar_pair(f, g)
    return ScalarFunction(f.domain, [a * b for a, b in zip(f.table, g.table)], f.codomain.p)


def bl_scale(a, f):
    a = rat(a)
    return ScalarFunction(f.domain, [a * v for v in f.table], f.codomain.p)
