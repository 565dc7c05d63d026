"""Exact Gaussian elimination over a field (Fraction or RatFunc entries)."""

from __future__ import annotations

from typing import List, Sequence


def rref(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form; returns (rows, pivot_columns).

    Entries may be any exact field elements supporting ``+ - * /`` and truth
    testing for zero.  The input is not modified.
    """
    m = [list(r) for r in rows if any(r)]
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        pick = next((i for i in range(row, len(m)) if m[i][col]), None)
        if pick is None:
            continue
        m[row], m[pick] = m[pick], m[row]
        piv = m[row][col]
        if piv != 1:
            inv = 1 / piv
            m[row] = [x * inv if x else x for x in m[row]]
        prow = m[row]
        for i in range(len(m)):
            if i != row and m[i][col]:
                k = m[i][col]
                m[i] = [x - k * y if y else x for x, y in zip(m[i], prow)]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return m[:row], pivots


def nullspace(rows: Sequence[Sequence], ncols: int, one=1, zero=0):
    """Basis of ``{x : rows · x = 0}``, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in zip(red, pivots):
            if r[fc]:
                v[pc] = -r[fc]
        basis.append(v)
    return basis


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def in_span(vectors: Sequence[Sequence], target: Sequence, ncols: int) -> bool:
    """Whether ``target`` is a linear combination of ``vectors``."""
    return rank(list(vectors) + [list(target)], ncols) == rank(vectors, ncols)
