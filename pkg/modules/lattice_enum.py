"""
Integer points of bounded rational polyhedra and the closest-vector problem for polyhedral norms.

integer_points branches coordinate by coordinate; the range of each coordinate
comes from two exact LPs over the polyhedron with the earlier coordinates fixed.
Output is lexicographic.
"""

from __future__ import annotations
import logging
from fractions import Fraction
from math import ceil, floor
from typing import List, Sequence, Tuple

from . import lp
from .errors import UnboundedPolyhedron
from .exact import IntVector, vector, vsub
from .polyhedra import HPolyhedron

logger = logging.getLogger("lattice_enum")


def _coordinate_range(A: List[List[Fraction]], b: List[Fraction], j: int, n: int):
    c = [0] * n
    c[j] = 1
    hi = lp.maximize(c, A, b)
    if hi.status == lp.INFEASIBLE:
        return None
    if hi.status == lp.UNBOUNDED:
        raise UnboundedPolyhedron("unbounded polyhedron: integer enumeration needs a bounded input", witness=hi.ray)
    lo = lp.minimize(c, A, b)
    if lo.status == lp.UNBOUNDED:
        raise UnboundedPolyhedron("unbounded polyhedron: integer enumeration needs a bounded input", witness=lo.ray)
    return ceil(lo.value), floor(hi.value)


def integer_points(H: HPolyhedron) -> List[IntVector]:
    """All points of Z^n inside H, lexicographically ordered."""
    n = H.dim
    A, b = H.matrix()
    out: List[IntVector] = []

    def branch(prefix: Tuple[int, ...], rows: List[List[Fraction]], rhs: List[Fraction]) -> None:
        k = len(prefix)
        if k == n:
            out.append(prefix)
            return
        remaining = n - k
        if remaining == 1:
            lo, hi = None, None
            for row, r in zip(rows, rhs):
                a = row[0]
                if a > 0:
                    bound = floor(r / a)
                    hi = bound if hi is None else min(hi, bound)
                elif a < 0:
                    bound = ceil(r / a)
                    lo = bound if lo is None else max(lo, bound)
                elif r < 0:
                    return
            if lo is None or hi is None:
                raise UnboundedPolyhedron("unbounded polyhedron: integer enumeration needs a bounded input")
            for v in range(lo, hi + 1):
                out.append(prefix + (v,))
            return
        rng = _coordinate_range(rows, rhs, 0, remaining)
        if rng is None:
            return
        for v in range(rng[0], rng[1] + 1):
            sub_rows = [row[1:] for row in rows]
            sub_rhs = [r - row[0] * v for row, r in zip(rows, rhs)]
            branch(prefix + (v,), sub_rows, sub_rhs)

    if n == 0:
        return [()]
    branch((), [list(r) for r in A], list(b))
    return out


def _round(x: Sequence) -> IntVector:
    return tuple(floor(Fraction(c) + Fraction(1, 2)) for c in x)


def seed_point(x: Sequence, norm) -> Tuple[IntVector, Fraction]:
    """Coordinate rounding followed by greedy unit moves; near, not necessarily nearest."""
    v = _round(x)
    d = norm.value(vsub(x, v))
    improved = True
    while improved:
        improved = False
        for i in range(len(v)):
            for step in (1, -1):
                w = v[:i] + (v[i] + step,) + v[i + 1:]
                dw = norm.value(vsub(x, w))
                if dw < d:
                    v, d, improved = w, dw, True
    return v, d


def ball_polytope(x: Sequence, norm, d) -> HPolyhedron:
    """{v : N(x - v) <= d} = {v : -l(v) <= d - l(x)}."""
    x = vector(x)
    d = Fraction(d)
    return HPolyhedron(len(x), tuple((-f, d - f(x)) for f in norm.forms))


def closest_lattice_points(x: Sequence, norm) -> Tuple[Fraction, List[IntVector]]:
    """(d_min(x), all v in Z^n attaining N(x - v) = d_min)."""
    x = vector(x)
    _, d = seed_point(x, norm)
    best = None
    winners: List[IntVector] = []
    for v in integer_points(ball_polytope(x, norm, d)):
        value = norm.value(vsub(x, v))
        if best is None or value < best:
            best, winners = value, [v]
        elif value == best:
            winners.append(v)
    logger.debug("closest points to %s: %d at distance %s", x, len(winners), best)
    return best, winners


def d_min(x: Sequence, norm) -> Fraction:
    return closest_lattice_points(x, norm)[0]
