"""
Exact two-phase simplex over Fractions with Bland's rule.

    maximize c.x  subject to  A x <= b,  x free

Free variables are split x = x+ - x-, every row gets a slack, rows with a
negative right-hand side get an artificial for phase 1. Bland's rule (lowest
index enters, lowest basic index breaks ratio ties) keeps it cycle-free, so
no epsilon appears anywhere.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

logger = logging.getLogger("lp")

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[tuple] = None
    ray: Optional[tuple] = None   # improving direction when status == unbounded

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dense tableau; rows[i][-1] is the right-hand side, obj[-1] is -z."""

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.rows = rows
        self.basis = basis
        self.obj: List[Fraction] = []

    @property
    def width(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else 0

    def set_objective(self, costs: Sequence[Fraction]) -> None:
        obj = [Fraction(c) for c in costs] + [Fraction(0)]
        for i, bv in enumerate(self.basis):
            cb = obj[bv]
            if cb != 0:
                row = self.rows[i]
                obj = [o - cb * r for o, r in zip(obj, row)]
        self.obj = obj

    def pivot(self, i: int, j: int) -> None:
        row = self.rows[i]
        piv = row[j]
        if piv != 1:
            row = [v / piv for v in row]
            self.rows[i] = row
        for k, other in enumerate(self.rows):
            if k != i:
                f = other[j]
                if f != 0:
                    self.rows[k] = [a - f * b for a, b in zip(other, row)]
        f = self.obj[j]
        if f != 0:
            self.obj = [a - f * b for a, b in zip(self.obj, row)]
        self.basis[i] = j

    def bland_step(self, allowed: int) -> str:
        j = next((c for c in range(allowed) if self.obj[c] > 0), None)
        if j is None:
            return OPTIMAL
        best = None
        for i, row in enumerate(self.rows):
            a = row[j]
            if a > 0:
                key = (row[-1] / a, self.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            self._unbounded_column = j
            return UNBOUNDED
        self.pivot(best[1], j)
        return "go_on"

    def run(self, allowed: int) -> str:
        while True:
            status = self.bland_step(allowed)
            if status != "go_on":
                return status

    def value_of(self, var: int) -> Fraction:
        for i, bv in enumerate(self.basis):
            if bv == var:
                return self.rows[i][-1]
        return Fraction(0)


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    n = len(c)
    m = len(A)
    c = [Fraction(v) for v in c]
    if m == 0:
        if all(v == 0 for v in c):
            return LPResult(OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in range(n)))
        return LPResult(UNBOUNDED, ray=tuple(c))

    # columns: x+ (n), x- (n), slacks (m), artificials (k)
    neg_rows = [i for i in range(m) if Fraction(b[i]) < 0]
    n_struct = 2 * n + m
    art_index = {i: n_struct + t for t, i in enumerate(neg_rows)}
    width = n_struct + len(neg_rows)

    rows: List[List[Fraction]] = []
    basis: List[int] = []
    for i in range(m):
        sign = -1 if i in art_index else 1
        row = [Fraction(0)] * (width + 1)
        for j in range(n):
            a = Fraction(A[i][j]) * sign
            row[j] = a
            row[n + j] = -a
        row[2 * n + i] = Fraction(sign)
        row[-1] = Fraction(b[i]) * sign
        if i in art_index:
            row[art_index[i]] = Fraction(1)
            basis.append(art_index[i])
        else:
            basis.append(2 * n + i)
        rows.append(row)

    tab = _Tableau(rows, basis)

    if neg_rows:
        tab.set_objective([0] * n_struct + [-1] * len(neg_rows))
        tab.run(width)
        if -tab.obj[-1] < 0:
            return LPResult(INFEASIBLE)
        # drive remaining artificials out of the basis, dropping redundant rows
        for i in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[i] >= n_struct:
                j = next((c2 for c2 in range(n_struct) if tab.rows[i][c2] != 0), None)
                if j is None:
                    del tab.rows[i]
                    del tab.basis[i]
                else:
                    tab.pivot(i, j)
        tab.rows = [r[:n_struct] + [r[-1]] for r in tab.rows]
        tab.obj = tab.obj[:n_struct] + [tab.obj[-1]]

    tab.set_objective(c + [-v for v in c] + [0] * m)
    status = tab.run(n_struct)
    if status == UNBOUNDED:
        j = tab._unbounded_column
        direction = [Fraction(0)] * n_struct
        direction[j] = Fraction(1)
        for i, bv in enumerate(tab.basis):
            direction[bv] = -tab.rows[i][j]
        ray = tuple(direction[k] - direction[n + k] for k in range(n))
        return LPResult(UNBOUNDED, ray=ray)

    x = tuple(tab.value_of(k) - tab.value_of(n + k) for k in range(n))
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, x)


def minimize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    res = maximize([-Fraction(v) for v in c], A, b)
    if res.status == OPTIMAL:
        res.value = -res.value
    return res


def feasible_point(A: Sequence[Sequence], b: Sequence, n: int) -> Optional[tuple]:
    res = maximize([0] * n, A, b)
    return res.x if res.status == OPTIMAL else None
