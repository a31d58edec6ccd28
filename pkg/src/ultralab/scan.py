"""Exact infimum of a predicate that is piecewise constant in eps.

Callers supply every value at which the predicate may change. Between two
consecutive candidates the predicate is constant, so probing each candidate
and one midpoint per gap decides the whole half-line.
"""

from fractions import Fraction

from .rational import INF


def probes(candidates):
    """(probe, left_end_if_gap) pairs covering (0, inf) in increasing order."""
    cs = sorted({Fraction(c) for c in candidates if c > 0})
    out = []
    prev = Fraction(0)
    for c in cs:
        out.append(((prev + c) / 2, prev))
        out.append((c, None))
        prev = c
    out.append((prev + 1 if prev else Fraction(1), prev))
    return out


def scan_infimum(pred, candidates):
    """inf {eps > 0 : pred(eps)}; INF if no probe is feasible."""
    for eps, gap_left in probes(candidates):
        if pred(eps):
            return eps if gap_left is None else gap_left
    return INF


def scan_supremum(pred, candidates):
    """sup {eps > 0 : pred(eps)}; INF if feasible beyond every candidate,
    None if nothing is feasible."""
    best = None
    ps = probes(candidates)
    for k, (eps, gap_left) in enumerate(ps):
        if pred(eps):
            if k == len(ps) - 1:
                return INF
            # a feasible gap extends to its right candidate
            best = eps if gap_left is None else ps[k + 1][0]
    return best
