"""Integer matrices: Smith and Hermite normal forms, kernels, saturation.

Matrices are plain row-major sequences of integer rows.  Results are
returned as tuples of tuples so they can be hashed and compared.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

IntMatrix = Sequence[Sequence[int]]
LatticeBasis = tuple[tuple[int, ...], ...]


def _copy(M: IntMatrix) -> list[list[int]]:
    return [[int(x) for x in row] for row in M]


def _freeze(M) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in M)


def identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(A: IntMatrix, B: IntMatrix) -> tuple[tuple[int, ...], ...]:
    if not A:
        return ()
    inner = len(B)
    cols = len(B[0]) if B else 0
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols))
        for i in range(len(A))
    )


def determinant(M: IntMatrix) -> int:
    """Bareiss fraction-free elimination."""
    A = _copy(M)
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def rank(M: Sequence[Sequence]) -> int:
    """Rank over Q (entries may be ints or Fractions)."""
    A = [[Fraction(x) for x in row] for row in M]
    r = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


def smith_normal_form(M: IntMatrix):
    """Return ``(U, D, V)`` with ``M == U @ D @ V``.

    ``U`` and ``V`` are unimodular; ``D`` is diagonal with nonnegative
    entries ``d_1 | d_2 | ...``.
    """
    U, D, V, _ = _smith(M)
    return U, D, V


def _smith(M: IntMatrix):
    D = _copy(M)
    m = len(D)
    n = len(D[0]) if m else 0
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]
    Vinv = [list(r) for r in identity(n)]

    # Invariant: M == U D V and V @ Vinv == I.
    def row_add(src, dst, k):  # row_dst += k * row_src
        if k:
            D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
            for row in U:
                row[src] -= k * row[dst]

    def row_swap(a, b):
        D[a], D[b] = D[b], D[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    def row_neg(a):
        D[a] = [-x for x in D[a]]
        for row in U:
            row[a] = -row[a]

    def col_add(src, dst, k):  # col_dst += k * col_src
        if k:
            for row in D:
                row[dst] += k * row[src]
            V[src] = [a - k * b for a, b in zip(V[src], V[dst])]
            for row in Vinv:
                row[dst] += k * row[src]

    def col_swap(a, b):
        for row in D:
            row[a], row[b] = row[b], row[a]
        V[a], V[b] = V[b], V[a]
        for row in Vinv:
            row[a], row[b] = row[b], row[a]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                return _freeze(U), _freeze(D), _freeze(V), _freeze(Vinv)
            _, pi, pj = min(entries)
            row_swap(t, pi)
            col_swap(t, pj)
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    row_add(t, i, -(D[i][t] // p))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    col_add(t, j, -(D[t][j] // p))
                    if D[t][j]:
                        done = False
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(bad, t, 1)
        if D[t][t] < 0:
            row_neg(t)
    return _freeze(U), _freeze(D), _freeze(V), _freeze(Vinv)


def diagonal(D: IntMatrix) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def hermite_normal_form(rows: IntMatrix, ncols: int | None = None) -> LatticeBasis:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped.  Pivots are positive and entries above each pivot
    are reduced into ``[0, pivot)``, which makes the result canonical.
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    if not A:
        return ()
    n = len(A[0]) if ncols is None else ncols
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
            clean = True
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if r < len(A) and A[r][c]:
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            r += 1
        if r == len(A):
            break
    return _freeze(row for row in A[:r] if any(row))


def in_lattice(v: Sequence[int], basis: LatticeBasis) -> bool:
    """Membership of ``v`` in the lattice with HNF basis ``basis``."""
    w = list(map(int, v))
    for row in basis:
        p = next(j for j, x in enumerate(row) if x)
        if w[p] % row[p]:
            return False
        q = w[p] // row[p]
        if q:
            w = [a - q * b for a, b in zip(w, row)]
    return not any(w)


def saturate(basis: IntMatrix, ncols: int | None = None) -> LatticeBasis:
    """The saturation ``(Q-span of basis) ∩ Z^n``, in Hermite normal form."""
    rows = [r for r in basis if any(r)]
    if not rows:
        return ()
    _, D, V, _ = _smith(rows)
    r = sum(1 for d in diagonal(D) if d)
    return hermite_normal_form(V[:r], ncols)


def is_primitive(basis: IntMatrix) -> bool:
    """True when the lattice spanned by ``basis`` is saturated in Z^n."""
    if not basis:
        return True
    _, D, _ = smith_normal_form(basis)
    return all(d == 1 for d in diagonal(D))


def kernel_lattice(M: IntMatrix, moduli: Sequence[int] | None = None, ncols: int | None = None) -> LatticeBasis:
    """Integer solutions ``m`` of ``M m ≡ 0``, as a Hermite-form basis.

    ``moduli[r]`` is 0 when row ``r`` must vanish exactly and ``l >= 2`` when
    it need only vanish modulo ``l``.  Without congruence rows the solution
    lattice is saturated; congruences can make it non-saturated (``2Z`` for
    ``m ≡ 0 mod 2``), and then the exact solution lattice is returned.
    """
    rows = _copy(M)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if n == 0:
        return ()
    if not rows:
        return identity(n)
    moduli = list(moduli) if moduli is not None else [0] * len(rows)
    if len(moduli) != len(rows):
        raise ValueError("one modulus per row expected")
    slack = [r for r, l in enumerate(moduli) if l]
    for r in range(len(rows)):
        rows[r] = rows[r] + [-moduli[r] if r == s else 0 for s in slack]
    _, D, _, Vinv = _smith(rows)
    rk = sum(1 for d in diagonal(D) if d)
    width = n + len(slack)
    gens = [[Vinv[i][j] for i in range(n)] for j in range(rk, width)]
    return hermite_normal_form(gens, n)
