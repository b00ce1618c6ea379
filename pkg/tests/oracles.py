"""Reference computations for the tests.

These avoid the package's own lattice, Groebner and strata code: lattices go
through sympy's integer normal forms, centers through a brute-force box.
"""
from fractions import Fraction
from itertools import product

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import hermite_normal_form, invariant_factors

BOX = 4


def box_solutions(n, condition, bound=BOX):
    return [m for m in product(range(-bound, bound + 1), repeat=n) if any(m) and condition(m)]


def q_condition(free_exps, torsion_exps, orders):
    """``m`` is central iff every free exponent row kills it and every
    torsion row kills it modulo its order."""
    def ok(m):
        for A in free_exps:
            if any(sum(a * e for a, e in zip(row, m)) for row in A):
                return False
        for T, l in zip(torsion_exps, orders):
            if any(sum(a * e for a, e in zip(row, m)) % l for row in T):
                return False
        return True
    return ok


def pi_condition(pi):
    return lambda m: all(sum(Fraction(a) * e for a, e in zip(row, m)) == 0 for row in pi)


def rational_rank(vectors):
    return Matrix(vectors).rank() if vectors else 0


def lattice_basis(vectors):
    if not vectors:
        return []
    H = hermite_normal_form(Matrix(vectors).T)
    cols = [tuple(int(x) for x in H.col(k)) for k in range(H.cols)]
    return [c for c in cols if any(c)]


def in_span(v, basis):
    """Integer membership for a basis with independent vectors."""
    if not basis:
        return not any(v)
    B = Matrix(basis).T
    x = (B.T * B).inv() * B.T * Matrix(v)
    return B * x == Matrix(v) and all(c.is_integer for c in x)


def primitive(basis):
    return not basis or all(abs(d) == 1 for d in invariant_factors(Matrix(basis), domain=ZZ))


def saturation_agrees(basis, solutions):
    """``basis`` is the saturation of the lattice spanned by ``solutions``:
    independent, primitive, with the same rational span."""
    r = len(basis)
    return (rational_rank(list(basis)) == r
            and rational_rank(list(solutions)) == r
            and rational_rank(list(basis) + list(solutions)) == r
            and primitive(list(basis)))


def lattice_agrees(basis, solutions):
    """``basis`` spans exactly the lattice spanned by ``solutions``."""
    gens = lattice_basis(list(solutions))
    return (rational_rank(list(basis)) == len(basis)
            and all(in_span(v, list(basis)) for v in solutions)
            and all(in_span(b, gens) for b in basis))


def _monomials(n, degree):
    return [m for m in product(range(degree + 1), repeat=n) if sum(m) == degree]


def homogeneous_membership(f, gens, n):
    """For homogeneous ``f`` and ``gens``: is ``f`` a combination of the
    multiples ``u * g`` of its own degree?  (Exact membership in that case.)"""
    if not f.terms:
        return True
    (d,) = {sum(m) for m in f.terms}
    columns = []
    for g in gens:
        dg = sum(next(iter(g.terms)))
        if dg > d:
            continue
        for u in _monomials(n, d - dg):
            columns.append({tuple(a + b for a, b in zip(u, m)): c for m, c in g.terms.items()})
    rows = _monomials(n, d)
    A = Matrix([[col.get(r, 0) for col in columns] + [f.terms.get(r, 0)] for r in rows])
    if not columns:
        return False
    return A[:, :-1].rank() == A.rank()
