"""Distributions and measures on a level-N model of Z_p: additivity, the
norm, exact Riemann sums, Dudley-type bounds and an exhaustive small mode,
and a convergence report for sequences of measures."""

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .ball_space import enumerate_balls
from .ballmaps import BallMap, beta, beta_star
from .core import pquotient
from .maps import ScalarField, ScalarFunction, bl_norm, sup_norm
from .prng import XorShift64Star
from .rational import PAdicAbsParams, fmt, padic_abs, rat


class UnboundedNormError(ValueError):
    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


@dataclass(frozen=True)
class LevelMeasure:
    """Atoms on the cosets a + p^N Z_p, a = 0..p^N - 1."""
    p: int
    level: int
    atoms: tuple
    kind: str = "measure"

    def __post_init__(self):
        PAdicAbsParams(self.p)
        if self.level < 1:
            raise ValueError("level must be >= 1")
        atoms = tuple(rat(a) for a in self.atoms)
        if len(atoms) != self.p ** self.level:
            raise ValueError(f"need {self.p ** self.level} atoms, got {len(atoms)}")
        object.__setattr__(self, "atoms", atoms)

    @property
    def size(self):
        return self.p ** self.level

    def value(self, k, a):
        """mu(a + p^k Z_p) for 0 <= k <= N."""
        if not 0 <= k <= self.level:
            raise ValueError("ball level out of range")
        m = self.p ** k
        a %= m
        return sum(self.atoms[x] for x in range(a, self.size, m))

    def balls(self):
        return [(k, a) for k in range(self.level + 1) for a in range(self.p ** k)]

    def __sub__(self, other):
        _compatible(self, other)
        return LevelMeasure(self.p, self.level, [a - b for a, b in zip(self.atoms, other.atoms)])

    def __add__(self, other):
        _compatible(self, other)
        return LevelMeasure(self.p, self.level, [a + b for a, b in zip(self.atoms, other.atoms)])

    def scale(self, c):
        c = rat(c)
        return LevelMeasure(self.p, self.level, [c * a for a in self.atoms], self.kind)

    def to_doc(self):
        return {"p": self.p, "level": self.level,
                "atoms": {str(i): fmt(a) for i, a in enumerate(self.atoms)}}


def _compatible(m1, m2):
    if m1.p != m2.p or m1.level != m2.level:
        raise ValueError("measures must share p and level")


def measure_from_doc(doc):
    p, n = int(doc["p"]), int(doc["level"])
    raw = doc["atoms"]
    if isinstance(raw, dict):
        atoms = [Fraction(0)] * (p ** n)
        for k, v in raw.items():
            i = int(k)
            if not 0 <= i < p ** n:
                raise ValueError(f"atom index {k} outside 0..{p ** n - 1}")
            atoms[i] = rat(v)
    else:
        atoms = [rat(v) for v in raw]
    return LevelMeasure(p, n, atoms)


def make_measure(kind, p, level, a=0, atoms=None, seed=0, vmin=-2, vmax=2):
    """dirac(a), haar, table(atoms) or random(seed, valuations vmin..vmax)."""
    size = p ** level
    if kind == "dirac":
        vals = [Fraction(0)] * size
        vals[a % size] = Fraction(1)
        return LevelMeasure(p, level, vals)
    if kind == "haar":
        return LevelMeasure(p, level, [Fraction(1, size)] * size, "distribution")
    if kind == "table":
        if atoms is None:
            raise ValueError("table measures need atoms")
        if isinstance(atoms, dict):
            return measure_from_doc({"p": p, "level": level, "atoms": atoms})
        return LevelMeasure(p, level, atoms)
    if kind == "random":
        rng = XorShift64Star(seed)
        vals = []
        for _ in range(size):
            if rng.coin(1, 4):
                vals.append(Fraction(0))
                continue
            unit = rng.randint(1, p * p)
            while unit % p == 0:
                unit += 1
            if rng.coin():
                unit = -unit
            vals.append(unit * Fraction(p) ** rng.randint(vmin, vmax))
        return LevelMeasure(p, level, vals)
    raise ValueError(f"unknown measure kind {kind!r}")


def measure_norm(mu):
    """sup over balls of every level of |mu(ball)|_p; a compact open set is
    a disjoint union of balls, so balls suffice."""
    return max(padic_abs(mu.value(k, a), mu.p) for k, a in mu.balls())


@dataclass(frozen=True)
class TestFunction:
    """A locally constant function of level M given on cosets mod p^M."""
    p: int
    level: int
    values: tuple

    __test__ = False  # not a pytest class

    def __post_init__(self):
        vals = tuple(rat(v) for v in self.values)
        if len(vals) != self.p ** self.level:
            raise ValueError("test function needs one value per coset")
        object.__setattr__(self, "values", vals)

    def __call__(self, x):
        return self.values[x % (self.p ** self.level)]

    def as_scalar_function(self):
        return ScalarFunction(pquotient(self.p, self.level), self.values, self.p)

    def bl_norm(self):
        return bl_norm(self.as_scalar_function())

    def sup_norm(self):
        return sup_norm(self.as_scalar_function())


def indicator(p, level, k, a):
    """chi of a + p^k Z_p as a level-`level` test function."""
    m = p ** k
    return TestFunction(p, level, [1 if x % m == a % m else 0 for x in range(p ** level)])


def integrate_step(f, mu):
    """sum over level-M cosets c of f(c) mu(c)."""
    if f.p != mu.p:
        raise ValueError("prime mismatch")
    if f.level > mu.level:
        raise ValueError(f"test function level {f.level} is finer than the measure level {mu.level}")
    return sum(f.values[c] * mu.value(f.level, c) for c in range(f.p ** f.level))


def integrate_with_modulus(f, mu, osc):
    """(level-N Riemann sum, ||mu|| * max oscillation). osc is a Rational
    bound for every level-N coset or a callable coset -> bound."""
    approx = sum(rat(f(a)) * mu.atoms[a] for a in range(mu.size))
    if callable(osc):
        worst = max(rat(osc(a)) for a in range(mu.size))
    else:
        worst = rat(osc)
    return approx, measure_norm(mu) * worst


@dataclass(frozen=True)
class DudleyBounds:
    lower: Fraction
    upper: Fraction
    exact: Fraction = None
    maximizer: tuple = None
    note: str = ""


def _coset_dist(p, a, b):
    return Fraction(0) if a == b else padic_abs(a - b, p)


def dudley_lower(nu):
    """max over balls of |c_B nu(B)| with |c_B| = min(1, diam B)."""
    p = nu.p
    return max(Fraction(1, p ** k) * padic_abs(nu.value(k, a), p) for k, a in nu.balls())


def _exact_small(nu, mv):
    p, N = nu.p, nu.level
    size = p ** N
    top = p ** mv
    dists = [[_coset_dist(p, a, b) for b in range(size)] for a in range(size)]
    best = [Fraction(-1), None]
    f = [0] * size

    def total():
        return padic_abs(sum(f[c] * nu.atoms[c] for c in range(size)), p)

    def dfs(c):
        if c == size:
            v = total()
            if v > best[0]:
                best[0] = v
                best[1] = tuple(f)
            return
        for r in range(top):
            # dil <= 1 against every earlier coset; sup norm <= 1 holds for residues
            if all(padic_abs(r - f[b], p) <= dists[c][b] for b in range(c) if r != f[b]):
                f[c] = r
                dfs(c + 1)
        f[c] = 0

    dfs(0)
    return best[0], best[1]


def dudley(mu1, mu2, mode="bounds", mv=3):
    """Bounds on the Dudley distance of the level-N model; exact_small adds
    the exhaustive model value (only for p^N <= 4 and N < mv <= 3)."""
    _compatible(mu1, mu2)
    nu = mu1 - mu2
    lower = dudley_lower(nu)
    upper = measure_norm(nu)
    if mode == "bounds":
        return DudleyBounds(lower, upper)
    if mode != "exact_small":
        raise ValueError(f"unknown mode {mode!r}")
    check_small(nu.p, nu.level, mv)
    exact, arg = _exact_small(nu, mv)
    return DudleyBounds(lower, upper, exact, arg,
                        "exact for the level-N model; a lower bound for the untruncated metric")


def check_small(p, level, mv):
    if p ** level > 4:
        raise ValueError(f"exact_small needs p^N <= 4 (got {p ** level})")
    if not level < mv <= 3:
        raise ValueError(f"exact_small needs N < M_v <= 3 (got N={level}, M_v={mv})")


# ------------------------------------------------------------ convergence

def ball_restriction(mu, ball_space):
    """mu as a scalar map on the balls of Z/p^N."""
    table = []
    N = mu.level
    for b in ball_space.balls:
        k = N - _level_drop(mu.p, len(b.members))
        table.append(mu.value(k, min(b.members)))
    return BallMap(ball_space, ScalarField(mu.p), table)


def _level_drop(p, count):
    j = 0
    while p ** j < count:
        j += 1
    return j


@dataclass
class ConvergenceReport:
    columns: list
    rows: list = field(default_factory=list)
    verdict: str = "PASS"
    norm_bound: Fraction = None
    failures: list = field(default_factory=list)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([row[0]] + [fmt(v) if isinstance(v, Fraction) else v for v in row[1:]])
        return buf.getvalue()


def convergence_analyzer(sequence, limit, panel, n_max, n_min=1, norm_bound=None):
    """Tabulate rho_s, beta, Dudley bounds and panel integrals of (mu_n, mu)
    and check the implication chain row by row and column by column."""
    bs = enumerate_balls(pquotient(limit.p, limit.level))
    lim_map = ball_restriction(limit, bs)
    mus = {n: sequence(n) for n in range(n_min, n_max + 1)}
    c = norm_bound
    if c is None:
        c = max(measure_norm(limit), measure_norm(mus[n_min]))
    for n in range(n_min, n_max + 1):
        if measure_norm(mus[n]) > c:
            raise UnboundedNormError(
                f"norm of mu_{n} is {fmt(measure_norm(mus[n]))} > bound {fmt(c)}", n)
    cols = (["n", "rho_s", "beta", "dudley_lower", "dudley_upper"]
            + [f"panel_f{j + 1}" for j in range(len(panel))] + ["verdict"])
    report = ConvergenceReport(cols, norm_bound=c)
    lim_ints = [integrate_step(f, limit) for f in panel]
    sups = [f.sup_norm() for f in panel]
    for n in range(n_min, n_max + 1):
        mu = mus[n]
        P = ball_restriction(mu, bs)
        rs = measure_norm(mu - limit)
        b = beta(1, P, lim_map)
        bstar = beta_star(1, P, lim_map)
        dl = dudley(mu, limit)
        gaps = [padic_abs(integrate_step(f, mu) - li, mu.p) for f, li in zip(panel, lim_ints)]
        ok = (bstar <= rs <= b and dl.lower <= dl.upper == rs
              and all(g <= s * rs for g, s in zip(gaps, sups)))
        if not ok:
            report.failures.append({"n": n, "reason": "row implication"})
        report.rows.append([n, rs, b, dl.lower, dl.upper] + gaps + ["PASS" if ok else "FAIL"])
    for j in range(1, len(cols) - 1):
        col = [row[j] for row in report.rows]
        if any(later > earlier for earlier, later in zip(col, col[1:])):
            report.failures.append({"column": cols[j], "reason": "not monotone"})
    report.verdict = "PASS" if not report.failures else "FAIL"
    return report
