"""Exact scalars: Fraction helpers, p-adic valuation and absolute value, and
an infinity marker that never mixes with rational arithmetic."""

import re
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

_RAT_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


class Infinity:
    """The +inf marker. Compares above every Rational, refuses arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ultralab-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def _no_arith(self, *_):
        raise TypeError("the infinity marker does not take part in arithmetic")

    __add__ = __radd__ = __sub__ = __rsub__ = _no_arith
    __mul__ = __rmul__ = __truediv__ = __rtruediv__ = _no_arith


INF = Infinity()


def is_inf(x):
    return x is INF


def rat(x):
    """Coerce int / Fraction / exact string into a Fraction.

    Floats and decimal strings are refused so nothing inexact slips in.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        m = _RAT_RE.match(x)
        if not m:
            raise ValueError(f"not an exact rational: {x!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ValueError(f"zero denominator: {x!r}")
        return Fraction(num, den)
    raise TypeError(f"cannot make an exact rational from {type(x).__name__}")


def fmt(x):
    """Render as 'num/den', 'k' for integers, 'inf' for the marker."""
    if x is INF:
        return "inf"
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_value(s):
    """Inverse of fmt, accepting the 'inf' marker."""
    if isinstance(s, str) and s.strip() == "inf":
        return INF
    return rat(s)


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class PAdicAbsParams:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be a prime integer, got {self.p!r}")

    def abs(self, q):
        return padic_abs(q, self)


def _int_val(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(q, p):
    """v_p(q) for nonzero q; raises on zero."""
    q = rat(q)
    if q == 0:
        raise ValueError("valuation of 0 is +infinity")
    return _int_val(abs(q.numerator), p) - _int_val(q.denominator, p)


def padic_abs(q, params):
    """|q|_p = p^(-v_p(q)), and 0 at q = 0."""
    p = params.p if isinstance(params, PAdicAbsParams) else int(params)
    q = rat(q)
    if q == 0:
        return Fraction(0)
    return Fraction(p) ** (-valuation(q, p))


def largest_power_below(p, bound):
    """Largest p^k (k an integer) strictly below a positive bound."""
    bound = rat(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    k = 0
    x = Fraction(1)
    if x < bound:
        while x * p < bound:
            x *= p
        return x
    while x >= bound:
        x /= p
    return x
