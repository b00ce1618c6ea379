"""Gaussian elimination over exact fields (Fraction or symbolic fractions)."""
from __future__ import annotations

from typing import Sequence

from .field import demote, inverse, is_rational


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    A = [[demote(x) for x in r] for r in rows if any(x != 0 for x in r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        candidates = [i for i in range(r, len(A)) if A[i][c] != 0]
        if not candidates:
            continue
        # a rational pivot keeps symbolic entries from growing
        piv = min(candidates, key=lambda i: (not is_rational(A[i][c]), i))
        A[r], A[piv] = A[piv], A[r]
        inv = inverse(A[r][c])
        A[r] = [demote(x * inv) if x != 0 else x for x in A[r]]
        support = [k for k in range(c, ncols) if A[r][k] != 0]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                row = A[i]
                for k in support:
                    row[k] = demote(row[k] - f * A[r][k])
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of ``{v : A v = 0}``."""
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis
