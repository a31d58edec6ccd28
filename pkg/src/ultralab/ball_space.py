"""Ball spaces of finite models: enumeration, lifting to the Hausdorff
metric (iterated to finite depth), the singleton embedding and diameter
functionals."""

from dataclasses import dataclass
from fractions import Fraction

from .core import (UltraSpace, Verdict, all_balls, canonical, explicit_space,
                   hausdorff_ball_formula, make_space, space_spec)
from .rational import fmt, rat

MAX_POINTS = 10 ** 4

M_FLAT = "M_flat"
M_FLAT_BAR = "M_flat_bar"


class BallSpace:
    """Ordered list of canonical balls of a base space (coarse to fine)."""

    def __init__(self, base, balls, variant=M_FLAT, depth=1):
        self.base = base
        self.balls = tuple(balls)
        self.variant = variant
        self.depth = depth
        self._index = {b.members: i for i, b in enumerate(self.balls)}
        self._lifted = None
        self._chains = None
        self._top = None

    def __len__(self):
        return len(self.balls)

    def __eq__(self, other):
        if not isinstance(other, BallSpace):
            return NotImplemented
        return (self.base == other.base and self.variant == other.variant
                and [b.members for b in self.balls] == [b.members for b in other.balls])

    def __hash__(self):
        return hash((self.base, self.variant, len(self.balls)))

    def index_of(self, members):
        return self._index[frozenset(members)]

    def diameters(self):
        return [b.diameter for b in self.balls]

    @property
    def whole(self):
        """Index of the whole space (first in coarse-to-fine order)."""
        if self._top is None:
            self._top = self._index[frozenset(self.base.points)]
        return self._top

    @property
    def lifted(self):
        """The balls as an Explicit space metrised by the ball formula."""
        if self._lifted is None:
            self._lifted = _lift_balls(self.balls)
        return self._lifted

    def dist(self, i, j):
        return self.lifted.d(i, j)

    # coarsening chains: B^delta for delta > 0 is a step function
    def chains(self):
        """For each ball index, the tuple of (threshold, index) steps:
        B^delta = chain ball for the last threshold strictly below delta,
        and B itself when no threshold lies below delta."""
        if self._chains is None:
            if not self.base.is_ultrametric:
                raise ValueError("coarsening chains need an ultrametric base")
            self._chains = tuple(self._chain(b) for b in self.balls)
        return self._chains

    def _chain(self, b):
        d = self.base.matrix
        centre = min(b.members)
        row = d[centre]
        steps = []
        for t in sorted({row[x] for x in self.base.points if x not in b.members}):
            members = frozenset(x for x in self.base.points if row[x] <= t)
            steps.append((t, self._index[members]))
        return tuple(steps)

    def chain_members(self, i):
        """Indices of B and its coarsenings, in increasing order."""
        return (i,) + tuple(k for _, k in self.chains()[i])

    def thresholds(self, i):
        return tuple(t for t, _ in self.chains()[i])

    def coarsen(self, i, delta):
        """Index of B^delta = U_delta(B)."""
        idx = i
        for t, k in self.chains()[i]:
            if t < delta:
                idx = k
            else:
                break
        return idx

    def all_thresholds(self):
        return sorted({t for ch in self.chains() for t, _ in ch})

    def to_doc(self):
        return {"space": space_spec(self.base), "variant": self.variant,
                "depth": self.depth,
                "balls": [list(b.sorted_members()) for b in self.balls]}


def _lift_balls(balls):
    n = len(balls)
    if n > MAX_POINTS:
        raise ValueError(f"ball space has {n} points, above the {MAX_POINTS} guard")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = hausdorff_ball_formula(balls[i], balls[j])
            rows[i][j] = rows[j][i] = v
    labels = [b.label() for b in balls]
    return explicit_space(labels, rows)


def enumerate_balls(space, variant=M_FLAT, depth=1):
    """M_flat (balls, singletons per the space flag) or M_flat_bar
    (M_flat plus every singleton) of the depth-1 iterate of space."""
    space = make_space(space)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    base = space
    for _ in range(depth - 1):
        base = lift_space(base)
    balls = all_balls(base)
    if variant == M_FLAT:
        if not base.include_singleton_balls:
            keep = [b for b in balls if len(b.members) > 1]
            balls = keep or balls  # a one-point space keeps its only ball
    elif variant != M_FLAT_BAR:
        raise ValueError(f"unknown variant {variant!r}")
    return BallSpace(base, balls, variant, depth)


def lift_space(space, depth=1):
    """M_flat iterated depth times, each level metrised by d_H."""
    space = make_space(space)
    for _ in range(depth):
        balls = all_balls(space)
        if len(balls) > MAX_POINTS:
            raise ValueError(f"lift has {len(balls)} points, above the {MAX_POINTS} guard")
        flag = space.include_singleton_balls
        if not flag:
            balls = [b for b in balls if len(b.members) > 1] or balls
        space = _lift_balls(balls).with_singleton_flag(flag)
    return space


def ball_space_from_doc(doc):
    base = make_space(doc["space"])
    members = [frozenset(m) for m in doc["balls"]]
    known = {b.members: b for b in all_balls(base)}
    balls = []
    for m in members:
        if m not in known:
            raise ValueError(f"member set {sorted(m)} is not a ball of the base")
        balls.append(known[m])
    return BallSpace(base, balls, doc.get("variant", M_FLAT), doc.get("depth", 1))


def embed_point(space, x):
    """j(x) = {x}."""
    return canonical(space, [x])


def check_jx_isometry(space):
    pts = list(space.points)
    for a in pts:
        ja = embed_point(space, a)
        for b in pts[a + 1:]:
            dh = hausdorff_ball_formula(ja, embed_point(space, b))
            if dh != space.d(a, b):
                return Verdict(False, {"points": [space.labels[a], space.labels[b]],
                                       "hausdorff": fmt(dh), "distance": fmt(space.d(a, b))})
    return Verdict(True, None)


@dataclass(frozen=True)
class AffineForm:
    """x -> slope * x + intercept."""
    slope: Fraction
    intercept: Fraction = Fraction(0)

    def __call__(self, x):
        return rat(self.slope) * x + rat(self.intercept)


def diam_functional(f, A):
    """f(diam A) for an exact table {diameter: value} or an AffineForm."""
    diam = A.diameter
    if isinstance(f, AffineForm):
        return f(diam)
    table = {rat(k): rat(v) for k, v in dict(f).items()}
    if diam not in table:
        raise KeyError(f"diameter functional undefined at {fmt(diam)}")
    return table[diam]
