"""Finite ultrametric models, canonical balls, set distances, the
eps-neighbourhood operator and the Hausdorff distance with its ball formula."""

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from .rational import is_prime, rat, valuation, fmt


class SpaceValidationError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Verdict:
    """Pass/fail outcome of a check with an optional counterexample payload."""
    ok: bool
    witness: dict = None


# test hook: names of deliberately broken code paths (negative controls only)
_FAULTS = set()


@contextmanager
def inject_fault(name):
    """Temporarily break a named code path; 'ball-formula' flips the
    intersecting branch of hausdorff_ball_formula."""
    _FAULTS.add(name)
    try:
        yield
    finally:
        _FAULTS.discard(name)


class UltraSpace:
    """A finite metric model with an exact distance matrix.

    model is 'explicit', 'pquotient' or 'cpchain'. Points are indices
    0..size-1; labels carry the human names.
    """

    __slots__ = ("model", "labels", "params", "_d", "is_ultrametric",
                 "include_singleton_balls", "_key", "_hash", "_values")

    def __init__(self, model, labels, matrix, params=None, is_ultrametric=None,
                 include_singleton_balls=True):
        self.model = model
        self.labels = tuple(labels)
        self.params = dict(params or {})
        self._d = tuple(tuple(row) for row in matrix)
        if is_ultrametric is None:
            is_ultrametric = _strong_triangle_witness(self._d) is None
        self.is_ultrametric = is_ultrametric
        self.include_singleton_balls = include_singleton_balls
        self._key = (model, self.labels, self._d)
        self._hash = hash(self._key)
        self._values = None

    @property
    def size(self):
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    @property
    def points(self):
        return range(len(self.labels))

    def d(self, x, y):
        return self._d[x][y]

    @property
    def matrix(self):
        return self._d

    def distance_values(self):
        """Sorted distinct attained distances, including 0."""
        if self._values is None:
            self._values = tuple(sorted({v for row in self._d for v in row}))
        return self._values

    def index(self, label):
        return self.labels.index(label)

    def with_singleton_flag(self, flag):
        return UltraSpace(self.model, self.labels, self._d, self.params,
                          self.is_ultrametric, flag)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, UltraSpace):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.model == "pquotient":
            return f"PQuotient({self.params['p']},{self.params['n']})"
        if self.model == "cpchain":
            radii = ",".join(fmt(r) for r in self.params["radii"])
            return f"CpChain({self.params['p']},{{{radii}}})"
        return f"Explicit({len(self)} points)"


def _validate_matrix(labels, matrix):
    n = len(labels)
    if n == 0:
        raise SpaceValidationError("a space needs at least one point")
    if len(set(labels)) != n:
        raise SpaceValidationError("point labels must be distinct")
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise SpaceValidationError("distance matrix must be square and match the labels")
    for i in range(n):
        if matrix[i][i] != 0:
            raise SpaceValidationError(f"nonzero diagonal at {labels[i]!r}",
                                       {"kind": "diagonal", "points": [labels[i]]})
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                raise SpaceValidationError(
                    f"asymmetric distance between {labels[i]!r} and {labels[j]!r}",
                    {"kind": "asymmetry", "points": [labels[i], labels[j]]})
            if matrix[i][j] <= 0:
                raise SpaceValidationError(
                    f"non-positive distance between distinct points {labels[i]!r}, {labels[j]!r}",
                    {"kind": "zero-distance", "points": [labels[i], labels[j]]})


def _ranks(matrix):
    vals = sorted({v for row in matrix for v in row})
    pos = {v: k for k, v in enumerate(vals)}
    return [[pos[v] for v in row] for row in matrix]


def _strong_triangle_witness(matrix):
    """First (x, y, z) in loop order with d(x,z) > max(d(x,y), d(y,z))."""
    r = _ranks(matrix)
    n = len(r)
    for x in range(n):
        rx = r[x]
        for y in range(n):
            rxy = rx[y]
            ry = r[y]
            for z in range(n):
                if rx[z] > rxy and rx[z] > ry[z]:
                    return (x, y, z)
    return None


def _triangle_witness(matrix):
    n = len(matrix)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if matrix[x][z] > matrix[x][y] + matrix[y][z]:
                    return (x, y, z)
    return None


def explicit_space(labels, matrix, include_singleton_balls=True):
    labels = [str(l) for l in labels]
    matrix = [[rat(v) for v in row] for row in matrix]
    _validate_matrix(labels, matrix)
    strong = _strong_triangle_witness(matrix)
    if strong is not None:
        weak = _triangle_witness(matrix)
        if weak is not None:
            x, y, z = (labels[k] for k in weak)
            raise SpaceValidationError(
                f"triangle inequality fails on ({x}, {y}, {z})",
                {"kind": "triangle", "points": [x, y, z]})
    return UltraSpace("explicit", labels, matrix, {}, strong is None,
                      include_singleton_balls)


def ultrametric_witness(space):
    """Labels of the first strong-triangle violation, or None."""
    w = _strong_triangle_witness(space.matrix)
    return None if w is None else tuple(space.labels[k] for k in w)


def pquotient(p, n, include_singleton_balls=True):
    """Z/p^n with d(x, y) = p^(-v_p(x - y))."""
    if not isinstance(p, int) or not is_prime(p):
        raise SpaceValidationError(f"p must be prime, got {p!r}")
    if not isinstance(n, int) or n < 1:
        raise SpaceValidationError(f"level n must be an integer >= 1, got {n!r}")
    size = p ** n
    if size > 10 ** 4:
        raise SpaceValidationError("p^n exceeds the 10^4 point guard")
    by_val = [Fraction(1, p ** k) for k in range(n)]
    rows = []
    for x in range(size):
        row = []
        for y in range(size):
            row.append(Fraction(0) if x == y else by_val[valuation(x - y, p)])
        rows.append(row)
    return UltraSpace("pquotient", [str(x) for x in range(size)], rows,
                      {"p": p, "n": n}, True, include_singleton_balls)


def cp_ball_dist(r1, r2):
    """Hausdorff distance between the balls B0(r1), B0(r2) of C_p."""
    return Fraction(0) if r1 == r2 else max(r1, r2)


def cpchain(p, radii, include_singleton_balls=True):
    """Points are the symbolic balls B0(r) of C_p, r from the radius set."""
    if not isinstance(p, int) or not is_prime(p):
        raise SpaceValidationError(f"p must be prime, got {p!r}")
    rs = sorted({rat(r) for r in radii})
    if not rs:
        raise SpaceValidationError("radius set must be nonempty")
    if rs[0] <= 0:
        raise SpaceValidationError("radii must be positive")
    rows = [[cp_ball_dist(a, b) for b in rs] for a in rs]
    labels = [f"B0({fmt(r)})" for r in rs]
    return UltraSpace("cpchain", labels, rows, {"p": p, "radii": tuple(rs)},
                      True, include_singleton_balls)


def make_space(spec):
    """Build a space from a model description dict (the JSON document form)."""
    if isinstance(spec, UltraSpace):
        return spec
    try:
        model = spec["model"]
    except (KeyError, TypeError):
        raise SpaceValidationError("space document needs a 'model' field")
    flag = spec.get("include_singleton_balls", True)
    if model == "pquotient":
        return pquotient(spec["p"], spec["n"], flag)
    if model == "explicit":
        return explicit_space(spec["points"], spec["matrix"], flag)
    if model == "cpchain":
        return cpchain(spec["p"], spec["radii"], flag)
    raise SpaceValidationError(f"unknown model {model!r}")


def space_spec(space):
    """Inverse of make_space."""
    if space.model == "pquotient":
        doc = {"model": "pquotient", "p": space.params["p"], "n": space.params["n"]}
    elif space.model == "cpchain":
        doc = {"model": "cpchain", "p": space.params["p"],
               "radii": [fmt(r) for r in space.params["radii"]]}
    else:
        doc = {"model": "explicit", "points": list(space.labels),
               "matrix": [[fmt(v) for v in row] for row in space.matrix]}
    if not space.include_singleton_balls:
        doc["include_singleton_balls"] = False
    return doc


# ---------------------------------------------------------------- sets

def _nonempty(A, what="set"):
    A = frozenset(A)
    if not A:
        raise ValueError(f"{what} must be nonempty")
    return A


def set_diam(space, A):
    A = sorted(_nonempty(A))
    d = space.matrix
    return max(d[x][y] for x in A for y in A)


def set_dist(space, A, B):
    A = _nonempty(A)
    B = _nonempty(B)
    d = space.matrix
    return min(d[x][y] for x in A for y in B)


def point_set_dist(space, x, A):
    row = space.matrix[x]
    return min(row[a] for a in A)


def neighborhood(space, A, eps):
    """U_eps(A) = {x : dist(x, A) < eps}."""
    A = _nonempty(A)
    eps = rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return frozenset(x for x in space.points if point_set_dist(space, x, A) < eps)


def hausdorff(space, A, B):
    """max(sup_a dist(a, B), sup_b dist(b, A))."""
    A = _nonempty(A)
    B = _nonempty(B)
    left = max(point_set_dist(space, a, B) for a in A)
    right = max(point_set_dist(space, b, A) for b in B)
    return max(left, right)


# --------------------------------------------------------------- balls

@dataclass(frozen=True, eq=False)
class CanonicalBall:
    """A ball identified by its member set."""
    space: UltraSpace
    members: frozenset
    diameter: Fraction
    canonical_radius: Fraction

    def __eq__(self, other):
        if not isinstance(other, CanonicalBall):
            return NotImplemented
        return self.members == other.members and self.space == other.space

    def __hash__(self):
        return hash(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members

    def sorted_members(self):
        return tuple(sorted(self.members))

    def label(self):
        labels = self.space.labels
        return "{" + ",".join(labels[i] for i in self.sorted_members()) + "}"


def _closed_set(space, c, r):
    row = space.matrix[c]
    return frozenset(x for x in space.points if row[x] <= r)


def canonical(space, members):
    """Wrap a member set known to be a ball."""
    members = frozenset(members)
    diam = set_diam(space, members)
    if len(members) == 1:
        radius = Fraction(0)
    elif space.is_ultrametric:
        radius = diam
    else:
        # smallest eccentricity over the centres that reproduce the set
        d = space.matrix
        radius = None
        for a in members:
            ecc = max(d[a][x] for x in members)
            if (radius is None or ecc < radius) and _closed_set(space, a, ecc) == members:
                radius = ecc
        if radius is None:
            raise ValueError("member set is not a ball of this space")
    return CanonicalBall(space, members, diam, radius)


def ball(space, center, radius, kind="closed"):
    """B_c(r) = {d(c,x) < r} (open) or {d(c,x) <= r} (closed)."""
    radius = rat(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if center not in space.points:
        raise ValueError(f"center {center!r} is not a point of the space")
    row = space.matrix[center]
    if kind == "closed":
        members = frozenset(x for x in space.points if row[x] <= radius)
    elif kind == "open":
        members = frozenset(x for x in space.points if row[x] < radius)
    else:
        raise ValueError("kind must be 'open' or 'closed'")
    return canonical(space, members)


def ball_order_key(b):
    """Coarse to fine, ties broken by sorted members."""
    return (-len(b.members), b.sorted_members())


def all_balls(space):
    """Every ball of a finite space (singletons included), coarse to fine.

    On a finite space every open ball is a closed ball at the largest
    attained radius below it, so closed balls at attained radii suffice.
    """
    seen = {}
    d = space.matrix
    for c in space.points:
        for r in sorted(set(d[c])):
            members = _closed_set(space, c, r)
            if members not in seen:
                seen[members] = None
    balls = [canonical(space, m) for m in seen]
    balls.sort(key=ball_order_key)
    return balls


def hausdorff_ball_formula(B1, B2):
    """Closed form for balls of an ultrametric space: dist if disjoint,
    max diameter if intersecting and distinct, 0 if equal."""
    if B1.members == B2.members:
        return Fraction(0)
    if B1.members.isdisjoint(B2.members):
        return set_dist(B1.space, B1.members, B2.members)
    if "ball-formula" in _FAULTS:
        return min(B1.diameter, B2.diameter)
    return max(B1.diameter, B2.diameter)


def prop22_check(space):
    """Scan disjoint ball pairs for d_H != dist; on finite spaces a
    violation exists exactly when the space is not ultrametric."""
    balls = all_balls(space)
    for i, b1 in enumerate(balls):
        for b2 in balls[i + 1:]:
            if not b1.members.isdisjoint(b2.members):
                continue
            dh = hausdorff(space, b1.members, b2.members)
            ds = set_dist(space, b1.members, b2.members)
            if dh != ds:
                return Verdict(False, {
                    "ball1": b1.label(), "ball2": b2.label(),
                    "ball1_radius": fmt(b1.canonical_radius),
                    "ball2_radius": fmt(b2.canonical_radius),
                    "hausdorff": fmt(dh), "dist": fmt(ds)})
    return Verdict(True, None)
