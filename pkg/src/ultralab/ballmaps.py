"""Metrics and functionals on maps from balls to a target space.

Everything reduces to coarsening chains: for a ball B of a finite
ultrametric space, U_delta(B) is B until delta passes the distance from B to
the nearest outside point, then the next enclosing ball, and so on up to the
whole space. All inf/sup over eps are therefore exact scans over finitely
many intervals.
"""

from dataclasses import dataclass
from fractions import Fraction

from .ball_space import BallSpace
from .core import UltraSpace, cp_ball_dist, cpchain
from .maps import PointMap, ScalarField, codomain_dist, rho_s
from .rational import INF, fmt, largest_power_below, padic_abs, rat
from .scan import scan_infimum


class DomainNotClosedError(ValueError):
    def __init__(self, message, ball=None):
        super().__init__(message)
        self.ball = ball


class OutOfGridError(ValueError):
    pass


class InstabilityError(RuntimeError):
    pass


class CpBallDomain:
    """The balls B0(r) of C_p, r in a finite radius grid.

    U_delta(B0(r)) = B0(max(r, delta)); coarsening is only defined when the
    result lands back on the grid.
    """

    def __init__(self, p, radii):
        self.space = cpchain(p, radii)
        self.p = p
        self.radii = self.space.params["radii"]
        self._pos = {r: i for i, r in enumerate(self.radii)}

    def __len__(self):
        return len(self.radii)

    def __eq__(self, other):
        return isinstance(other, CpBallDomain) and other.space == self.space

    def __hash__(self):
        return hash(self.space)

    @property
    def lifted(self):
        return self.space

    def diameters(self):
        return list(self.radii)

    def index_of_radius(self, r):
        return self._pos[rat(r)]

    def has_radius(self, r):
        return rat(r) in self._pos

    def coarsen(self, i, delta):
        target = max(self.radii[i], rat(delta))
        if target not in self._pos:
            raise OutOfGridError(f"B0({fmt(self.radii[i])})^{fmt(delta)} leaves the radius grid")
        return self._pos[target]


class BallMap:
    """A total table from the balls of a domain to codomain values."""

    def __init__(self, ball_domain, codomain, table):
        self.ball_domain = ball_domain
        self.codomain = codomain
        self.table = PointMap(ball_domain.lifted, codomain, table).table

    def __call__(self, i):
        return self.table[i]

    def __len__(self):
        return len(self.table)

    def as_point_map(self):
        return PointMap(self.ball_domain.lifted, self.codomain, self.table)

    def __eq__(self, other):
        return (isinstance(other, BallMap) and self.table == other.table
                and self.ball_domain == other.ball_domain
                and self.codomain == other.codomain)

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"BallMap({[fmt(v) if isinstance(v, Fraction) else v for v in self.table]})"


def _pair(P1, P2):
    if P1.ball_domain != P2.ball_domain or P1.codomain != P2.codomain:
        raise ValueError("ball maps must share ball domain and codomain")
    return codomain_dist(P1.codomain)


# --------------------------------------------------------- feasibility sets

@dataclass(frozen=True)
class Interval:
    """{e : lo < e <= hi} or, with lo_closed, {e : lo <= e <= hi};
    hi may be INF (then unbounded and open)."""
    lo: Fraction
    lo_closed: bool
    hi: object

    def __contains__(self, e):
        if e < self.lo or (e == self.lo and not self.lo_closed):
            return False
        return self.hi is INF or e <= self.hi

    def to_doc(self):
        return {"lo": fmt(self.lo), "lo_closed": self.lo_closed, "hi": fmt(self.hi)}


def _merge(pieces):
    out = []
    for piece in pieces:
        if out and out[-1].hi is not INF and out[-1].hi == piece.lo:
            out[-1] = Interval(out[-1].lo, out[-1].lo_closed, piece.hi)
        else:
            out.append(piece)
    return tuple(out)


@dataclass(frozen=True)
class FeasibilityScan:
    """breakpoints split (0, inf) into (s_i, s_{i+1}]; worst[i] is the
    largest distance the condition must absorb on interval i; feasible is
    the exact solution set as a union of intervals."""
    breakpoints: tuple
    worst: tuple
    feasible: tuple

    def __contains__(self, e):
        return any(e in piece for piece in self.feasible)

    def infimum(self):
        return self.feasible[0].lo if self.feasible else INF


def _solve(breakpoints, worst):
    edges = [Fraction(0)] + list(breakpoints) + [INF]
    pieces = []
    for i, m in enumerate(worst):
        lo, hi = edges[i], edges[i + 1]
        if m <= lo:
            pieces.append(Interval(lo, False, hi))
        elif hi is INF or m <= hi:
            pieces.append(Interval(m, True, hi))
    return FeasibilityScan(tuple(breakpoints), tuple(worst), _merge(pieces))


def _chain_positions(bs, cuts):
    """For each ball, the chain index in force on each interval of cuts."""
    chains = bs.chains()
    out = []
    for steps in chains:
        pos = []
        j = 0
        for lo in [Fraction(0)] + list(cuts):
            while j < len(steps) and steps[j][0] <= lo:
                j += 1
            pos.append(j)
        out.append(pos)
    return out


def beta_scan(lam, P1, P2):
    """Solution set of: for all B, d(P1(B), P2(B^(lam*e))) <= e and
    d(P2(B), P1(B^(lam*e))) <= e."""
    lam = rat(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    d = _pair(P1, P2)
    bs = P1.ball_domain
    chains = bs.chains()
    # chain step at threshold t happens once lam * e > t
    cuts = sorted({t / lam for steps in chains for t, _ in steps})
    positions = _chain_positions(bs, [c * lam for c in cuts])
    worst = [Fraction(0)] * (len(cuts) + 1)
    for i, steps in enumerate(chains):
        members = (i,) + tuple(k for _, k in steps)
        a1, a2 = P1(i), P2(i)
        for k, j in enumerate(positions[i]):
            c = members[j]
            v = max(d(a1, P2(c)), d(a2, P1(c)))
            if v > worst[k]:
                worst[k] = v
    return _solve(cuts, worst)


def beta(lam, P1, P2):
    """inf e > 0 with d(P1(B), P2(B^(lam e))) <= e and the reverse, all B."""
    _pair(P1, P2)
    if P1.table == P2.table:
        return Fraction(0)
    return beta_scan(lam, P1, P2).infimum()


def beta_star_profile(lam, P1, P2):
    """Per-ball infimum when each ball may pick its own eps_B, eps'_B <= e."""
    lam = rat(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    d = _pair(P1, P2)
    bs = P1.ball_domain
    out = []
    for i, steps in enumerate(bs.chains()):
        ts = [Fraction(0)] + [t for t, _ in steps]
        members = (i,) + tuple(k for _, k in steps)
        best1 = best2 = None
        e_ball = INF
        for j, c in enumerate(members):
            v1, v2 = d(P1(i), P2(c)), d(P2(i), P1(c))
            best1 = v1 if best1 is None else min(best1, v1)
            best2 = v2 if best2 is None else min(best2, v2)
            m = max(best1, best2)
            upper = ts[j + 1] / lam if j + 1 < len(ts) else INF
            if upper is INF or m <= upper:
                cand = max(m, ts[j] / lam)
                if e_ball is INF or cand < e_ball:
                    e_ball = cand
        out.append(e_ball)
    return tuple(out)


def beta_star(lam, P1, P2):
    _pair(P1, P2)
    if P1.table == P2.table:
        return Fraction(0)
    return max(beta_star_profile(lam, P1, P2))


def eta(lam, P):
    """inf e with d(P(B), P(B^(lam e))) <= e for all B."""
    return beta_scan(lam, P, P).infimum()


def class_membership(lam, P):
    """Whether d(P(B), P(B^(lam e))) <= e for every e > 0 and ball B."""
    lam = rat(lam)
    d = codomain_dist(P.codomain)
    for i, steps in enumerate(P.ball_domain.chains()):
        for t, k in steps:
            if d(P(i), P(k)) > t / lam:
                return False
    return True


def beta_feasible(lam, P1, P2, eps, balls=None):
    """The defining condition of beta at one eps, by direct coarsening."""
    d = _pair(P1, P2)
    lam, eps = rat(lam), rat(eps)
    dom = P1.ball_domain
    for i in (range(len(dom)) if balls is None else balls):
        k = dom.coarsen(i, lam * eps)
        if d(P1(i), P2(k)) > eps or d(P2(i), P1(k)) > eps:
            return False
    return True


# ------------------------------------------------------------------ limits

@dataclass(frozen=True)
class BetaLimits:
    beta0: Fraction
    beta_inf: Fraction
    beta_star0: Fraction
    beta_star_inf: Fraction
    lambda_small: Fraction
    lambda_large: Fraction


def _relevant_values(P1, P2):
    d = codomain_dist(P1.codomain)
    vals = set()
    for i in range(len(P1.ball_domain)):
        for c in P1.ball_domain.chain_members(i):
            vals.add(d(P1(i), P2(c)))
            vals.add(d(P2(i), P1(c)))
    return sorted(v for v in vals if v > 0)


def _settle(fn, lams, toward_zero_ok):
    vals = [fn(l) for l in lams]
    if vals[0] == vals[1] == vals[2]:
        return vals[0]
    # a per-ball infimum sitting on a threshold t/lam decays like 1/lam
    if toward_zero_ok and vals[1] * 2 == vals[0] and vals[2] * 4 == vals[0]:
        return Fraction(0)
    raise InstabilityError(
        "lambda-limit did not stabilise: " + ", ".join(fmt(v) for v in vals))


def beta_limits(P1, P2):
    """(beta^0, beta^inf, beta*^0, beta*^inf), evaluated beyond the last
    lambda-breakpoint with a halving/doubling stability check."""
    _pair(P1, P2)
    if P1.table == P2.table:
        z = Fraction(0)
        return BetaLimits(z, z, z, z, Fraction(1), Fraction(1))
    vals = _relevant_values(P1, P2)
    ts = [t for t in P1.ball_domain.all_thresholds()]
    if ts:
        small = min(ts) / (2 * vals[-1])
        large = 2 * max(ts) / vals[0]
    else:
        small = large = Fraction(1)
    smalls = [small, small / 2, small / 4]
    larges = [large, large * 2, large * 4]
    b0 = _settle(lambda l: beta(l, P1, P2), smalls, False)
    binf = _settle(lambda l: beta(l, P1, P2), larges, False)
    bs0 = _settle(lambda l: beta_star(l, P1, P2), smalls, False)
    bsinf = _settle(lambda l: beta_star(l, P1, P2), larges, True)
    mid = [beta(Fraction(1), P1, P2), beta_star(Fraction(1), P1, P2)]
    if not (b0 <= mid[0] <= binf) or not (bsinf <= mid[1] <= bs0):
        raise InstabilityError("lambda-monotonicity violated while taking limits")
    return BetaLimits(b0, binf, bs0, bsinf, small, large)


# ------------------------------------------------------ admissibility etc.

def _delta_scan(P, Q=None, two_sided=False):
    """Intervals of delta on which every B^delta is fixed, with the worst
    d(P(B), Q(B^delta)) (and the reverse when two_sided) on each."""
    Q = P if Q is None else Q
    d = codomain_dist(P.codomain)
    bs = P.ball_domain
    chains = bs.chains()
    cuts = bs.all_thresholds()
    positions = _chain_positions(bs, cuts)
    worst = [Fraction(0)] * (len(cuts) + 1)
    for i, steps in enumerate(chains):
        members = (i,) + tuple(k for _, k in steps)
        for k, j in enumerate(positions[i]):
            c = members[j]
            v = d(P(i), Q(c))
            if two_sided:
                v = max(v, d(Q(i), P(c)))
            if v > worst[k]:
                worst[k] = v
    return cuts, worst


@dataclass(frozen=True)
class AdmissibilityReport:
    d_a: object
    c_eps: tuple   # ((eps_from, C_eps), ...): C_eps for eps >= eps_from until the next row
    C: object
    caveat: str = ("finite model: delta below the smallest coarsening threshold "
                   "leaves every ball fixed, so d_a = 0")


def admissibility(P):
    cuts, worst = _delta_scan(P)
    edges = list(cuts) + [INF]
    d_a = min(worst)
    rows = []
    for v in sorted(set(worst)):
        # C_eps = right end of the last delta-interval whose worst case fits
        last = max(k for k, m in enumerate(worst) if m <= v)
        rows.append((v, edges[last]))
    C = rows[0][1]
    return AdmissibilityReport(d_a, tuple(rows), C)


def c_eps(P, eps):
    """sup of delta admissible for eps, or None if eps is not admissible."""
    eps = rat(eps)
    cuts, worst = _delta_scan(P)
    edges = list(cuts) + [INF]
    ok = [k for k, m in enumerate(worst) if m <= eps]
    return edges[max(ok)] if ok else None


@dataclass(frozen=True)
class HReport:
    h12: tuple
    h21: tuple
    h11: tuple
    h22: tuple
    h_low1: Fraction
    h_low2: Fraction
    H1: Fraction
    H2: Fraction
    H12: Fraction


def _h_table(P, Q):
    d = codomain_dist(P.codomain)
    bs = P.ball_domain
    return tuple(max(d(P(i), Q(c)) for c in bs.chain_members(i)) for i in range(len(bs)))


def h_functionals(P1, P2):
    """h_{P->Q}(B) = sup over the chain of B of d(P(B), Q(B')), with the
    inf/sup aggregates over balls."""
    _pair(P1, P2)
    h12, h21 = _h_table(P1, P2), _h_table(P2, P1)
    h11, h22 = _h_table(P1, P1), _h_table(P2, P2)
    return HReport(h12, h21, h11, h22, min(h11), min(h22), max(h11), max(h22),
                   max(max(a, b) for a, b in zip(h12, h21)))


@dataclass(frozen=True)
class OmegaReport:
    O_eps: tuple
    omega_low: object
    omega_up: object
    omega_hat: object
    omega_hat_star: object
    O_star_12: tuple
    O_star_21: tuple


def _o_set(P1, P2, eps):
    cuts, worst = _delta_scan(P1, P2, two_sided=True)
    edges = [Fraction(0)] + list(cuts) + [INF]
    return _merge([Interval(edges[k], False, edges[k + 1])
                   for k, m in enumerate(worst) if m <= eps])


def _o_star_set(P, Q, eps):
    """{delta : every B has delta_B <= delta with d(P(B), Q(B^delta_B)) <= eps};
    an up-set, returned as at most one interval."""
    d = codomain_dist(P.codomain)
    bs = P.ball_domain
    need = Fraction(0)
    for i, steps in enumerate(bs.chains()):
        if d(P(i), Q(i)) <= eps:
            continue
        reach = None
        for t, k in steps:
            if d(P(i), Q(k)) <= eps:
                reach = t
                break
        if reach is None:
            return ()
        need = max(need, reach)
    return (Interval(need, False, INF),)


def _nonempty_meet(a, b):
    for x in a:
        for y in b:
            lo = max(x.lo, y.lo)
            if x.hi is INF and y.hi is INF:
                return True
            hi = y.hi if x.hi is INF else (x.hi if y.hi is INF else min(x.hi, y.hi))
            if lo < hi:
                return True
            if lo == hi and lo in x and lo in y:
                return True
    return False


def omega_functionals(P1, P2, eps):
    d = _pair(P1, P2)
    eps = rat(eps)
    O = _o_set(P1, P2, eps)
    if O:
        lo, up = O[0].lo, O[-1].hi
    else:
        lo = up = Fraction(0)
    cands = set(_relevant_values(P1, P2))
    if P1.table == P2.table:
        hat = hat_star = Fraction(0)
    else:
        def unbounded(e):
            s = _o_set(P1, P2, e)
            return bool(s) and s[-1].hi is INF
        hat = scan_infimum(unbounded, cands)
        hat_star = scan_infimum(
            lambda e: _nonempty_meet(_o_star_set(P1, P2, e), _o_star_set(P2, P1, e)), cands)
    return OmegaReport(O, lo, up, hat, hat_star,
                       _o_star_set(P1, P2, eps), _o_star_set(P2, P1, eps))


# ---------------------------------------------------------------- scaling

def _unit_residue(a, modulus, p):
    inv = pow(a.denominator % modulus, -1, modulus)
    return (a.numerator * inv) % modulus


def dilate_ball(domain, i, a):
    """Index of a * B in the ball domain."""
    a = rat(a)
    if a == 0:
        raise ValueError("dilation factor must be nonzero")
    if isinstance(domain, CpBallDomain):
        r = padic_abs(a, domain.p) * domain.radii[i]
        if not domain.has_radius(r):
            raise DomainNotClosedError(
                f"{fmt(a)}*B0({fmt(domain.radii[i])}) = B0({fmt(r)}) leaves the domain",
                domain.space.labels[i])
        return domain.index_of_radius(r)
    base = domain.base
    if base.model != "pquotient":
        raise DomainNotClosedError("dilation is only defined on p-adic models")
    p, n = base.params["p"], base.params["n"]
    b = domain.balls[i]
    if padic_abs(a, p) != 1:
        raise DomainNotClosedError(
            f"dilation by {fmt(a)} collapses {b.label()} in Z/{p}^{n}", b.label())
    u = _unit_residue(a, p ** n, p)
    image = frozenset((u * x) % (p ** n) for x in b.members)
    return domain.index_of(image)


def scale_domain(P, a, strict=True):
    """P^a(B) = P(a * B). On a truncated radius grid strict=False keeps only
    the balls whose dilate stays inside."""
    a = rat(a)
    dom = P.ball_domain
    if isinstance(dom, CpBallDomain):
        s = padic_abs(a, dom.p)
        keep = [r for r in dom.radii if dom.has_radius(s * r)]
        if strict and len(keep) != len(dom.radii):
            bad = next(r for r in dom.radii if not dom.has_radius(s * r))
            raise DomainNotClosedError(
                f"{fmt(a)}*B0({fmt(bad)}) leaves the radius grid", f"B0({fmt(bad)})")
        if not keep:
            raise DomainNotClosedError("no ball of the grid survives the dilation")
        new = CpBallDomain(dom.p, keep)
        table = [P(dom.index_of_radius(s * r)) for r in keep]
        return BallMap(new, P.codomain, table)
    table = [P(dilate_ball(dom, i, a)) for i in range(len(dom))]
    return BallMap(dom, P.codomain, table)


def scale_range(P, a):
    """(aP)(B) = a * P(B) for scalar-valued P."""
    if not isinstance(P.codomain, ScalarField):
        raise TypeError("range scaling needs a scalar codomain")
    a = rat(a)
    return BallMap(P.ball_domain, P.codomain, [a * v for v in P.table])


# ------------------------------------------------------ chain construction

@dataclass(frozen=True)
class ChainWitness:
    delta: Fraction
    eps: Fraction
    r: Fraction
    image_radius: Fraction
    coarsened_radius: Fraction
    coarsened_image_radius: Fraction
    distance: Fraction
    holds: bool
    rho_s: Fraction


def inverse_radius_map(r):
    """Radius of B0(r)^(1/r) = B0(max(r, 1/r))."""
    return max(r, 1 / r)


def chain_pair(p, radii):
    """P1(B0(r)) = B0(r)^(1/r) and P2 = P1 except P2(B0(1)) = B0(2), on the
    chain grid, as ball maps into the chain of their images."""
    radii = sorted({rat(r) for r in radii} | {Fraction(1)})
    dom = CpBallDomain(p, radii)
    images = [inverse_radius_map(r) for r in radii]
    cod = cpchain(p, set(images) | {Fraction(2)})
    pos = {r: i for i, r in enumerate(cod.params["radii"])}
    t1 = [pos[r] for r in images]
    t2 = [pos[Fraction(2)] if r == 1 else pos[inverse_radius_map(r)] for r in radii]
    return BallMap(dom, cod, t1), BallMap(dom, cod, t2)


def example48(delta, eps, p=3):
    """Witness that the map B -> B^(1/diam B) admits no uniform delta: a
    radius r < min(delta, 1/delta, 1/eps) with d(P1(B), P1(B^delta)) = 1/r > eps."""
    delta, eps = rat(delta), rat(eps)
    if delta <= 0 or eps <= 0:
        raise ValueError("delta and eps must be positive")
    r = largest_power_below(p, min(delta, 1 / delta, 1 / eps))
    img = inverse_radius_map(r)
    coarse = max(r, delta)
    coarse_img = inverse_radius_map(coarse)
    dist = cp_ball_dist(img, coarse_img)
    grid = {Fraction(p) ** k for k in range(-3, 4)} | {r, coarse}
    P1, P2 = chain_pair(p, grid)
    return ChainWitness(delta, eps, r, img, coarse, coarse_img, dist,
                        dist == 1 / r and dist > eps, rho_s(P1.as_point_map(), P2.as_point_map()))
