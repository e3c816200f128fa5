"""Exact rational linear programming.

A dense two-phase tableau simplex over :class:`fractions.Fraction` with
Bland's rule (smallest entering index, smallest leaving basis index), so it
terminates without cycling and every answer is exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Literal, Optional, Sequence, Tuple

from .affine import AffineFunction, Point

logger = logging.getLogger(__name__)

Status = Literal["optimal", "infeasible", "unbounded"]
ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    status: Status
    value: Optional[Fraction] = None
    x: Optional[Point] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(rows: List[List[Fraction]], basis: List[int], i: int, j: int) -> None:
    piv = rows[i][j]
    pivot_row = [a / piv for a in rows[i]]
    rows[i] = pivot_row
    for k, row in enumerate(rows):
        if k == i:
            continue
        f = row[j]
        if f:
            rows[k] = [a - f * p for a, p in zip(row, pivot_row)]
    basis[i] = j


def _run(rows: List[List[Fraction]], basis: List[int], cost: Sequence[Fraction], allowed: Sequence[int]) -> Status:
    while True:
        weighted = [(i, cost[basis[i]]) for i in range(len(rows)) if cost[basis[i]]]
        in_basis = set(basis)
        entering = None
        for j in allowed:
            if j in in_basis:
                continue
            reduced = cost[j] - sum(w * rows[i][j] for i, w in weighted)
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best: Optional[Tuple[Fraction, int, int]] = None
        for i, row in enumerate(rows):
            a = row[entering]
            if a > 0:
                cand = (row[-1] / a, basis[i], i)
                if best is None or cand < best:
                    best = cand
        if best is None:
            return "unbounded"
        _pivot(rows, basis, best[2], entering)


def solve_standard(c: Sequence[Fraction], A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> LPResult:
    """max c.y subject to A y <= b, y >= 0."""
    n = len(c)
    n_rows = len(A)
    n_art = sum(1 for bi in b if bi < 0)
    width = n + n_rows + n_art
    rows: List[List[Fraction]] = []
    basis: List[int] = []
    artificials: List[int] = []
    for i, (ai, bi) in enumerate(zip(A, b)):
        row = [ZERO] * (width + 1)
        sign = -1 if bi < 0 else 1
        for j, a in enumerate(ai):
            row[j] = sign * Fraction(a)
        row[n + i] = Fraction(sign)
        row[-1] = sign * Fraction(bi)
        if bi < 0:
            col = n + n_rows + len(artificials)
            row[col] = Fraction(1)
            artificials.append(col)
            basis.append(col)
        else:
            basis.append(n + i)
        rows.append(row)

    art_set = set(artificials)
    if artificials:
        phase1 = [ZERO] * width
        for col in artificials:
            phase1[col] = Fraction(-1)
        _run(rows, basis, phase1, range(width))
        if sum(phase1[basis[i]] * rows[i][-1] for i in range(len(rows))) < 0:
            return LPResult("infeasible")
        keep = []
        for i in range(len(rows)):
            if basis[i] in art_set:
                col = next((j for j in range(width) if j not in art_set and rows[i][j] != 0), None)
                if col is None:
                    continue  # redundant row
                _pivot(rows, basis, i, col)
            keep.append(i)
        rows = [rows[i] for i in keep]
        basis = [basis[i] for i in keep]

    cost = [Fraction(a) for a in c] + [ZERO] * (width - n)
    allowed = [j for j in range(width) if j not in art_set]
    if _run(rows, basis, cost, allowed) == "unbounded":
        return LPResult("unbounded")
    y = [ZERO] * width
    for i, col in enumerate(basis):
        y[col] = rows[i][-1]
    value = sum((cost[j] * y[j] for j in range(n)), ZERO)
    logger.debug("lp %dx%d optimal at %s", n_rows, n, value)
    return LPResult("optimal", value, tuple(y[:n]))


def maximize(c: Sequence[Fraction], A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> LPResult:
    """max c.x subject to A x <= b with x free."""
    n = len(c)
    split_c = list(c) + [-a for a in c]
    split_A = [list(row) + [-a for a in row] for row in A]
    res = solve_standard(split_c, split_A, b)
    if not res.optimal:
        return res
    y = res.x
    return LPResult("optimal", res.value, tuple(y[j] - y[n + j] for j in range(n)))


def _region_rows(region: Sequence[AffineFunction]) -> Tuple[List[List[Fraction]], List[Fraction]]:
    # g(x) >= 0  <=>  -g.v . x <= g.b
    return [[-a for a in g.v] for g in region], [g.b for g in region]


def optimize_affine(f: AffineFunction, region: Sequence[AffineFunction], *, maximize_: bool = True) -> LPResult:
    """Optimize ``f`` over the closed polyhedron ``{g >= 0 for g in region}``."""
    A, b = _region_rows(region)
    sign = 1 if maximize_ else -1
    res = maximize([sign * a for a in f.v], A, b)
    if not res.optimal:
        return res
    return LPResult("optimal", res.value * sign + f.b, res.x)


def max_of_min(members: Sequence[AffineFunction], region: Sequence[AffineFunction]) -> LPResult:
    """max over the closed polyhedron of min(members): one slack variable s."""
    m = members[0].dim
    A, b = _region_rows(region)
    A = [row + [ZERO] for row in A]
    for a in members:
        # s <= a(x)  <=>  -a.v . x + s <= a.b
        A.append([-c for c in a.v] + [Fraction(1)])
        b.append(a.b)
    c = [ZERO] * m + [Fraction(1)]
    res = maximize(c, A, b)
    if not res.optimal:
        return res
    return LPResult("optimal", res.value, res.x[:m])
