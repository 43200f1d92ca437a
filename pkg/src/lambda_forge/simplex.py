"""Exact phase-1 simplex over an ordered exact field (Fraction or FieldElem).

Solves A x = b, x >= 0 feasibility by minimizing the sum of artificial
variables with Bland's anti-cycling rule.  Dense tableau; intended for
desk-scale systems (tens of rows, a few thousand columns).
"""

from __future__ import annotations

from typing import Optional, Sequence

from .field import FieldElem, ZERO, ONE


def solve_feasibility(
    columns: Sequence[Sequence[FieldElem]], rhs: Sequence[FieldElem]
) -> Optional[list[FieldElem]]:
    """A nonnegative solution x of sum_j x_j * columns[j] = rhs, or None."""
    m = len(rhs)
    ncols = len(columns)
    rows = []
    b = []
    for i in range(m):
        bi = FieldElem.coerce(rhs[i])
        row = [FieldElem.coerce(columns[j][i]) for j in range(ncols)]
        if bi.sign() < 0:
            bi = -bi
            row = [-v for v in row]
        rows.append(row)
        b.append(bi)

    # Tableau columns: original variables, then one artificial per row.
    for i in range(m):
        for k in range(m):
            rows[i].append(ONE if k == i else ZERO)
    basis = [ncols + i for i in range(m)]

    def objective_row():
        # reduced costs for minimizing the artificial sum
        art_rows = [i for i in range(m) if basis[i] >= ncols]
        cost = []
        for j in range(ncols + m):
            s = ZERO
            for i in art_rows:
                aij = rows[i][j]
                if aij.sign() != 0:
                    s = s + aij
            cost.append((ONE if j >= ncols else ZERO) - s)
        val = ZERO
        for i in art_rows:
            val = val + b[i]
        return cost, val

    while True:
        cost, val = objective_row()
        enter = -1
        for j in range(ncols + m):
            if j in basis:
                continue
            if cost[j].sign() < 0:
                enter = j
                break  # Bland: smallest index
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a.sign() > 0:
                ratio = b[i] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return None  # unbounded phase-1 cannot happen; defensive
        _pivot(rows, b, leave, enter)
        basis[leave] = enter

    _, val = objective_row()
    if val.sign() != 0:
        return None  # infeasible

    # Drive any artificial variables still basic (at value 0) out.
    for i in range(m):
        if basis[i] >= ncols:
            pivot_col = -1
            for j in range(ncols):
                if rows[i][j].sign() != 0:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                _pivot(rows, b, i, pivot_col)
                basis[i] = pivot_col
            # else: redundant row; harmless, artificial stays at zero

    x = [ZERO] * ncols
    for i in range(m):
        if basis[i] < ncols:
            x[basis[i]] = b[i]
    return x


def _pivot(rows, b, pi, pj):
    m = len(rows)
    piv = rows[pi][pj]
    inv = ONE / piv
    rows[pi] = [v * inv for v in rows[pi]]
    b[pi] = b[pi] * inv
    for i in range(m):
        if i == pi:
            continue
        f = rows[i][pj]
        if f.sign() == 0:
            continue
        rows[i] = [v - f * w for v, w in zip(rows[i], rows[pi])]
        b[i] = b[i] - f * b[pi]
