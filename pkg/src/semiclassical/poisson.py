"""Poisson brackets on commutative polynomial and Laurent algebras.

A structure stores ``P_ij = {x_i, x_j}`` for ``i < j`` and extends it to all
polynomials as the unique biderivation

    {f, g} = sum_{i<j} P_ij * (df/dx_i * dg/dx_j - dg/dx_i * df/dx_j).

The Jacobiator of such a bracket is a derivation in each argument, so the
Jacobi identity holds everywhere once it holds on generator triples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .errors import ValidationError
from .polynomial import Polynomial


@dataclass(frozen=True)
class Witness:
    """A generator triple whose Jacobiator does not vanish."""
    i: int
    j: int
    k: int
    residual: object
    l: int | None = None  # output index, for structure-constant checks


def _antisymmetric(matrix, n):
    for i in range(n):
        if matrix[i][i] != 0:
            return False
        for j in range(i + 1, n):
            if matrix[i][j] != -matrix[j][i]:
                return False
    return True


class PoissonStructure:
    """Bracket table on the generators of ``k[x_1^(±1), ..., x_n^(±1)]``."""

    def __init__(self, names: Sequence[str], table: Mapping[tuple[int, int], Polynomial],
                 laurent: Sequence[int] = (), log_linear=None):
        self.names = tuple(names)
        self.n = n = len(self.names)
        if len(set(self.names)) != n:
            raise ValidationError(f"variable names must be unique: {self.names}")
        self.laurent = frozenset(laurent)
        clean = {}
        for (i, j), p in table.items():
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValidationError(f"bad bracket index pair {(i, j)}")
            if p.n != n:
                raise ValidationError("bracket entry over the wrong number of variables")
            if i > j:
                i, j, p = j, i, -p
            if (i, j) in clean and clean[(i, j)] != p:
                raise ValidationError(f"conflicting entries for {{{self.names[i]},{self.names[j]}}}")
            if p:
                clean[(i, j)] = p
        for p in clean.values():
            for m in p.terms:
                bad = [k for k, e in enumerate(m) if e < 0 and k not in self.laurent]
                if bad:
                    raise ValidationError(f"negative exponent on non-Laurent variable {self.names[bad[0]]}")
        self.table = clean
        self.log_linear = None
        if log_linear is not None:
            pi = [list(row) for row in log_linear]
            if len(pi) != n or any(len(r) != n for r in pi) or not _antisymmetric(pi, n):
                raise ValidationError("log-linear matrix must be antisymmetric n x n")
            for i, j in combinations(range(n), 2):
                expected = Polynomial.variable(n, i) * Polynomial.variable(n, j) * pi[i][j]
                if self.entry(i, j) != expected:
                    raise ValidationError("table disagrees with the log-linear matrix")
            self.log_linear = tuple(tuple(r) for r in pi)

    @classmethod
    def from_log_linear(cls, names: Sequence[str], pi, laurent: Sequence[int] = ()) -> "PoissonStructure":
        n = len(names)
        table = {}
        for i, j in combinations(range(n), 2):
            if pi[i][j] != 0:
                table[(i, j)] = Polynomial.variable(n, i) * Polynomial.variable(n, j) * pi[i][j]
        return cls(names, table, laurent, log_linear=pi)

    def entry(self, i: int, j: int) -> Polynomial:
        if i == j:
            return Polynomial.zero(self.n)
        if i < j:
            return self.table.get((i, j), Polynomial.zero(self.n))
        return -self.table.get((j, i), Polynomial.zero(self.n))

    def detect_log_linear(self):
        """The matrix ``pi`` with ``P_ij = pi_ij x_i x_j``, or ``None``."""
        n = self.n
        pi = [[0] * n for _ in range(n)]
        for (i, j), p in self.table.items():
            target = tuple(int(k in (i, j)) for k in range(n))
            if len(p.terms) != 1 or target not in p.terms:
                return None
            c = p.terms[target]
            pi[i][j], pi[j][i] = c, -c
        return tuple(tuple(r) for r in pi)

    def with_log_linear(self) -> "PoissonStructure":
        pi = self.detect_log_linear()
        if pi is None:
            return self
        return PoissonStructure(self.names, self.table, self.laurent, log_linear=pi)

    def restrict(self, indices: Sequence[int]) -> "PoissonStructure":
        """The structure on a subset of generators; entries must not involve the others."""
        idx = list(indices)
        pos = {k: a for a, k in enumerate(idx)}
        table = {}
        for (i, j), p in self.table.items():
            if i in pos and j in pos:
                terms = {}
                for m, c in p.terms.items():
                    if any(e for k, e in enumerate(m) if k not in pos):
                        raise ValidationError(
                            f"{{{self.names[i]},{self.names[j]}}} involves a dropped generator")
                    terms[tuple(m[k] for k in idx)] = c
                table[(pos[i], pos[j])] = Polynomial(len(idx), terms)
        names = [self.names[k] for k in idx]
        laurent = [pos[k] for k in self.laurent if k in pos]
        return PoissonStructure(names, table, laurent).with_log_linear()

    def variable(self, i: int) -> Polynomial:
        return Polynomial.variable(self.n, i)

    def __eq__(self, other):
        return (isinstance(other, PoissonStructure) and self.names == other.names
                and self.table == other.table and self.laurent == other.laurent)

    def __hash__(self):
        return hash((self.names, frozenset(self.table.items())))

    def format_table(self, order: str = "diagonal") -> list[str]:
        return [f"{{{self.names[i]},{self.names[j]}}} = {self.entry(i, j).format(self.names)}"
                for i, j in pair_order(self.n, order)]


def pair_order(n: int, order: str = "diagonal") -> list[tuple[int, int]]:
    """Index pairs ``i < j``.  ``diagonal`` walks the superdiagonals of the
    upper triangle (neighbours first); ``lex`` is row by row."""
    pairs = list(combinations(range(n), 2))
    if order == "diagonal":
        pairs.sort(key=lambda p: (p[1] - p[0], p[0]))
    return pairs


def bracket(S: PoissonStructure, f: Polynomial, g: Polynomial) -> Polynomial:
    if f.n != S.n or g.n != S.n:
        raise ValidationError("polynomial and structure have different variable counts")
    df = [f.derivative(i) for i in range(S.n)]
    dg = [g.derivative(i) for i in range(S.n)]
    result = Polynomial.zero(S.n)
    for (i, j), p in S.table.items():
        cross = df[i] * dg[j] - dg[i] * df[j]
        if cross:
            result = result + p * cross
    return result


def hamiltonian(S: PoissonStructure, f: Polynomial) -> list[Polynomial]:
    """The vector ``({f,x_1}, ..., {f,x_n})``."""
    return [bracket(S, f, S.variable(i)) for i in range(S.n)]


def jacobiator(S: PoissonStructure, f, g, h) -> Polynomial:
    return (bracket(S, f, bracket(S, g, h)) + bracket(S, g, bracket(S, h, f))
            + bracket(S, h, bracket(S, f, g)))


def jacobi_check(S: PoissonStructure) -> Witness | None:
    """``None`` when the Jacobi identity holds, else the first failing triple."""
    xs = [S.variable(i) for i in range(S.n)]
    for i, j, k in combinations(range(S.n), 3):
        r = jacobiator(S, xs[i], xs[j], xs[k])
        if r:
            return Witness(i, j, k, r)
    return None


@dataclass(frozen=True)
class LieStructureConstants:
    """``[e_i, e_j] = sum_l c[(i, j)][l] e_l``, stored for ``i < j``."""
    dim: int
    constants: Mapping[tuple[int, int], tuple] = field(default_factory=dict)
    names: tuple[str, ...] = ()

    def __post_init__(self):
        clean = {}
        for (i, j), vec in dict(self.constants).items():
            vec = tuple(vec)
            if len(vec) != self.dim or i == j or not (0 <= i < self.dim and 0 <= j < self.dim):
                raise ValidationError(f"bad structure constants for pair {(i, j)}")
            if i > j:
                i, j, vec = j, i, tuple(-c for c in vec)
            if any(c != 0 for c in vec):
                clean[(i, j)] = vec
        object.__setattr__(self, "constants", clean)
        names = tuple(self.names) or tuple(f"x{i + 1}" for i in range(self.dim))
        if len(names) != self.dim:
            raise ValidationError("one name per basis vector expected")
        object.__setattr__(self, "names", names)

    def c(self, l: int, i: int, j: int):
        if i == j:
            return 0
        if i < j:
            return self.constants.get((i, j), (0,) * self.dim)[l]
        return -self.constants.get((j, i), (0,) * self.dim)[l]

    def __hash__(self):
        return hash((self.dim, frozenset(self.constants.items()), self.names))


def kks_structure(c: LieStructureConstants) -> PoissonStructure:
    n = c.dim
    table = {}
    for (i, j), vec in c.constants.items():
        table[(i, j)] = Polynomial(n, {tuple(int(k == l) for k in range(n)): v
                                       for l, v in enumerate(vec) if v != 0})
    return PoissonStructure(c.names, table)


def lie_jacobi_check(c: LieStructureConstants) -> Witness | None:
    n = c.dim
    for i, j, k in combinations(range(n), 3):
        for l in range(n):
            total = 0
            for m in range(n):
                total = total + (c.c(m, i, j) * c.c(l, m, k) + c.c(m, j, k) * c.c(l, m, i)
                                 + c.c(m, k, i) * c.c(l, m, j))
            if total != 0:
                return Witness(i, j, k, total, l)
    return None
