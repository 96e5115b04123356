"""Exact linear programming over the rationals.

Two-phase tableau simplex with Bland's rule, on ``Fraction`` entries.  Problems in
this package have at most a few dozen constraints in dimension <= 4, so a dense
tableau is fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _pivot(t: list[list[Fraction]], cost: list[Fraction], row: int, col: int) -> None:
    pv = t[row][col]
    t[row] = [x / pv for x in t[row]]
    pr = t[row]
    for i, r in enumerate(t):
        if i != row and r[col]:
            f = r[col]
            t[i] = [a - f * b for a, b in zip(r, pr)]
    if cost[col]:
        f = cost[col]
        cost[:] = [a - f * b for a, b in zip(cost, pr)]


def _run(t, cost, basis, allowed: int) -> str:
    """Minimise with reduced-cost row ``cost`` (last entry = -objective)."""
    while True:
        col = next((j for j in range(allowed) if cost[j] < 0), None)
        if col is None:
            return OPTIMAL
        best = None
        for i, r in enumerate(t):
            if r[col] > 0:
                ratio = r[-1] / r[col]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        row = best[1]
        _pivot(t, cost, row, col)
        basis[row] = col


def solve_standard(a: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    """Minimise ``c.y`` subject to ``a y = b``, ``y >= 0``."""
    m = len(a)
    n = len(c)
    rows = []
    rhs = []
    for r, bi in zip(a, b):
        r = [Fraction(x) for x in r]
        bi = Fraction(bi)
        if bi < 0:
            r, bi = [-x for x in r], -bi
        rows.append(r)
        rhs.append(bi)
    # phase 1: artificial variable per row
    t = [rows[i] + [Fraction(int(i == k)) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [-sum((t[i][j] for i in range(m)), Fraction(0)) for j in range(n)] + [Fraction(0)] * m
    cost.append(-sum(rhs, Fraction(0)))
    _run(t, cost, basis, n)
    if cost[-1] != 0:
        return LPResult(INFEASIBLE)
    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(t):
        if basis[i] >= n:
            col = next((j for j in range(n) if t[i][j] != 0), None)
            if col is None:
                del t[i]
                del basis[i]
                continue
            _pivot(t, [Fraction(0)] * (n + m + 1), i, col)
            basis[i] = col
        i += 1
    t = [r[:n] + [r[-1]] for r in t]
    cost = [Fraction(x) for x in c] + [Fraction(0)]
    for i, j in enumerate(basis):
        if cost[j]:
            f = cost[j]
            cost = [x - f * y for x, y in zip(cost, t[i])]
    status = _run(t, cost, basis, n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    y = [Fraction(0)] * n
    for i, j in enumerate(basis):
        y[j] = t[i][-1]
    return LPResult(OPTIMAL, -cost[-1], tuple(y))


def minimize(objective: Sequence, normals: Sequence[Sequence], levels: Sequence) -> LPResult:
    """Minimise ``<objective, x>`` over ``{x : <normals[i], x> >= levels[i]}``, x free."""
    dim = len(objective)
    m = len(normals)
    # x = p - q, slack s: N p - N q - s = levels
    a = []
    for i, row in enumerate(normals):
        a.append(list(row) + [-v for v in row] + [-int(k == i) for k in range(m)])
    c = list(objective) + [-v for v in objective] + [0] * m
    res = solve_standard(a, levels, c)
    if res.status != OPTIMAL:
        return res
    y = res.point
    x = tuple(y[k] - y[dim + k] for k in range(dim))
    return LPResult(OPTIMAL, res.value, x)


def feasible_point(
    normals: Sequence[Sequence],
    levels: Sequence,
    strict: Sequence[bool] | None = None,
    dim: int | None = None,
) -> tuple[Fraction, ...] | None:
    """A point with ``<n_i, x> >= l_i`` (``>`` where ``strict[i]``), or None."""
    if dim is None:
        if not normals:
            raise ValueError("dimension is required when there are no constraints")
        dim = len(normals[0])
    if not normals:
        return tuple(Fraction(0) for _ in range(dim))
    if strict is None or not any(strict):
        res = minimize([0] * dim, normals, levels)
        return res.point if res.status == OPTIMAL else None
    # maximise a margin t <= 1 on the strict rows
    rows = [list(n) + ([-1] if s else [0]) for n, s in zip(normals, strict)]
    rows.append([0] * dim + [-1])
    lv = list(levels) + [-1]
    res = minimize([0] * dim + [-1], rows, lv)
    if res.status != OPTIMAL or res.value >= 0:
        return None
    return res.point[:dim]


def interior_margin(normals: Sequence[Sequence], levels: Sequence) -> Fraction | None:
    """Largest ``t <= 1`` with ``<n_i, x> >= l_i + t`` feasible; None if the system is empty."""
    dim = len(normals[0])
    rows = [list(n) + [-1] for n in normals]
    rows.append([0] * dim + [-1])
    res = minimize([0] * dim + [-1], rows, list(levels) + [-1])
    if res.status != OPTIMAL:
        return None
    return -res.value
