"""Commutative ideals: Groebner bases, membership, Poisson ideals and cores."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from .core.field import demote, inverse
from .core.linalg import nullspace, rref
from .errors import DegreeBoundExceeded, NotStabilized, ValidationError
from .poisson import PoissonStructure, bracket
from .polynomial import Monomial, Polynomial, poly_sum

DEFAULT_GB_CAP = 20


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "degrevlex"
    weights: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "weighted"):
            raise ValidationError(f"unknown monomial order {self.kind!r}")
        if self.kind == "weighted":
            if not self.weights or any(int(w) <= 0 for w in self.weights):
                raise ValidationError("weighted order needs positive weights")
            object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    def key(self, m: Monomial):
        """Sort key: larger key means larger monomial."""
        if self.kind == "lex":
            return m
        if self.kind == "degrevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        return (sum(w * e for w, e in zip(self.weights, m)), m)


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def leading_monomial(f: Polynomial, order: MonomialOrder) -> Monomial:
    return max(f.terms, key=order.key)


def leading_term(f: Polynomial, order: MonomialOrder):
    m = leading_monomial(f, order)
    return m, f.terms[m]


def monic(f: Polynomial, order: MonomialOrder) -> Polynomial:
    _, c = leading_term(f, order)
    return f.scale(inverse(c))


def reduce_full(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Remainder of ``f`` modulo ``basis`` with every term reduced."""
    leads = [leading_term(g, order) for g in basis]
    terms = dict(f.terms)
    rem: dict = {}
    key = order.key
    while terms:
        m = max(terms, key=key)
        c = terms[m]
        for g, (lm, lc) in zip(basis, leads):
            if _divides(lm, m):
                shift = tuple(a - b for a, b in zip(m, lm))
                factor = c * inverse(lc)
                for gm, gc in g.terms.items():
                    t = tuple(a + b for a, b in zip(gm, shift))
                    v = demote(terms.get(t, 0) - factor * gc)
                    if v != 0:
                        terms[t] = v
                    else:
                        terms.pop(t, None)
                break
        else:
            rem[m] = c
            del terms[m]
    return Polynomial(f.n, rem)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    mf, cf = leading_term(f, order)
    mg, cg = leading_term(g, order)
    lcm = tuple(max(a, b) for a, b in zip(mf, mg))
    return (f.shift(tuple(a - b for a, b in zip(lcm, mf)), inverse(cf))
            - g.shift(tuple(a - b for a, b in zip(lcm, mg)), inverse(cg)))


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX,
               degree_cap: int = DEFAULT_GB_CAP) -> list[Polynomial]:
    """Reduced, monic Groebner basis, sorted by decreasing leading monomial."""
    G = [monic(g, order) for g in gens if g]
    for g in G:
        if g.is_laurent():
            raise ValidationError("ideal generators must be polynomials, not Laurent polynomials")
        if g.total_degree() > degree_cap:
            raise DegreeBoundExceeded(f"generator degree {g.total_degree()} exceeds cap {degree_cap}")
    if not G:
        return []
    pairs = set(combinations(range(len(G)), 2))
    leads = [leading_monomial(g, order) for g in G]

    def lcm_key(pair):
        i, j = pair
        lcm = tuple(max(a, b) for a, b in zip(leads[i], leads[j]))
        return (order.key(lcm), pair)

    while pairs:
        pair = min(pairs, key=lcm_key)
        pairs.discard(pair)
        i, j = pair
        li, lj = leads[i], leads[j]
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading monomials
        lcm = tuple(max(a, b) for a, b in zip(li, lj))
        # chain criterion
        if any(k not in (i, j) and _divides(leads[k], lcm)
               and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs
               for k in range(len(G))):
            continue
        r = reduce_full(s_polynomial(G[i], G[j], order), G, order)
        if r:
            if r.total_degree() > degree_cap:
                raise DegreeBoundExceeded(
                    f"Groebner basis element of degree {r.total_degree()} exceeds cap {degree_cap}")
            G.append(monic(r, order))
            leads.append(leading_monomial(G[-1], order))
            k = len(G) - 1
            pairs |= {(a, k) for a in range(k)}
            if not any(leads[-1]):
                return [Polynomial.constant(G[0].n, 1)]
    # minimize
    keep = []
    for i, g in enumerate(G):
        if any(_divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i)
               for j in range(len(G)) if j != i):
            continue
        keep.append(g)
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        reduced.append(monic(reduce_full(g, others, order), order))
    reduced.sort(key=lambda g: order.key(leading_monomial(g, order)), reverse=True)
    return reduced


def s_pairs_reduce_to_zero(basis: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Buchberger's criterion, checked directly on every pair."""
    return all(not reduce_full(s_polynomial(f, g, order), basis, order)
               for f, g in combinations(basis, 2))


class IdealPresentation:
    """An ideal given by generators; its reduced Groebner basis is computed
    on first use and cached (concurrent first uses serialize on a lock)."""

    def __init__(self, generators: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX,
                 n: int | None = None, degree_cap: int = DEFAULT_GB_CAP):
        gens = [g for g in generators]
        if n is None:
            if not gens:
                raise ValidationError("the number of variables is needed for the zero ideal")
            n = gens[0].n
        if any(g.n != n for g in gens):
            raise ValidationError("generators over different numbers of variables")
        self.generators = tuple(gens)
        self.n = n
        self.order = order
        self.degree_cap = degree_cap
        self._gb: tuple[Polynomial, ...] | None = None
        self._lock = threading.Lock()

    def groebner(self) -> tuple[Polynomial, ...]:
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    self._gb = tuple(buchberger(self.generators, self.order, self.degree_cap))
        return self._gb

    def normal_form(self, f: Polynomial) -> Polynomial:
        return reduce_full(f, self.groebner(), self.order)

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def contains_ideal(self, other: "IdealPresentation") -> bool:
        return all(self.contains(g) for g in other.generators)

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.groebner()

    def same_ideal(self, other: "IdealPresentation") -> bool:
        if self.order == other.order:
            return self.groebner() == other.groebner()
        return self.contains_ideal(other) and other.contains_ideal(self)

    def with_order(self, order: MonomialOrder) -> "IdealPresentation":
        return IdealPresentation(self.groebner() or self.generators, order, self.n, self.degree_cap)

    def format(self, names: Sequence[str]) -> str:
        gb = self.groebner()
        if not gb:
            return "<0>"
        return "<" + ", ".join(g.format(names) for g in gb) + ">"


def groebner(I: IdealPresentation) -> tuple[Polynomial, ...]:
    return I.groebner()


def contains(I: IdealPresentation, f: Polynomial) -> bool:
    return I.contains(f)


def is_poisson_ideal(I: IdealPresentation, S: PoissonStructure) -> bool:
    """``{x_i, g}`` in ``I`` for all variables and basis elements suffices:
    ``{-, g}`` is a derivation and ``I`` is an ideal."""
    if I.n != S.n:
        raise ValidationError("ideal and structure have different variable counts")
    xs = [S.variable(i) for i in range(S.n)]
    return all(I.contains(bracket(S, x, g)) for g in I.groebner() for x in xs)


@dataclass(frozen=True)
class CoreCertificate:
    poisson_verified: bool
    contained_verified: bool
    degree_bound: int
    iterations: int
    maximal_among: str

    def lines(self) -> list[str]:
        return [
            f"poisson ideal: {'verified' if self.poisson_verified else 'FAILED'}",
            f"contained in J: {'verified' if self.contained_verified else 'FAILED'}",
            f"maximal among: {self.maximal_among}",
            f"iterations: {self.iterations}",
        ]


def monomials_up_to(n: int, degree: int) -> list[Monomial]:
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            m = [0] * n
            for k in combo:
                m[k] += 1
            out.append(tuple(m))
    return out


def _echelon(polys: Sequence[Polynomial], monos: Sequence[Monomial]) -> list[Polynomial]:
    """Reduced echelon basis of a span; ``monos`` are in decreasing order so
    each pivot is the leading monomial of its row."""
    index = {m: k for k, m in enumerate(monos)}
    rows = []
    for f in polys:
        row = [0] * len(monos)
        for m, c in f.terms.items():
            row[index[m]] = c
        rows.append(row)
    R, _ = rref(rows, len(monos))
    n = len(monos[0]) if monos else 0
    return [Polynomial(n, {monos[k]: c for k, c in enumerate(r) if c != 0}) for r in R]


def _reduce_span(g: Polynomial, rows: Sequence[Polynomial], leads: Sequence[Monomial]) -> Polynomial:
    """Remainder of ``g`` modulo the span of a reduced echelon basis."""
    for row, lm in zip(rows, leads):
        c = g.terms.get(lm, 0)
        if c != 0:
            g = g - row.scale(c)
    return g


def _truncation(basis: Sequence[Polynomial], n: int, D: int, order: MonomialOrder):
    """A basis of ``I ∩ (polynomials of degree <= D)``.  With a degree-compatible
    order every such element is a combination of ``m*g`` with ``deg(m*g) <= D``."""
    monos = sorted(monomials_up_to(n, D), key=order.key, reverse=True)
    multiples = []
    for g in basis:
        dg = g.total_degree()
        if dg <= D:
            multiples.extend(g.shift(m) for m in monomials_up_to(n, D - dg))
    return _echelon(multiples, monos)


def stable_core_bounded(J: IdealPresentation, S: PoissonStructure, degree_bound: int = 3,
                        max_iter: int = 20, method: str = "auto") -> tuple[IdealPresentation, CoreCertificate]:
    """Largest Poisson ideal inside ``J`` among ideals generated in degree <= D.

    Runs ``I_0 = J``, ``I_{k+1} = < f in I_k, deg f <= D : {x_i, f} in I_k for all i >``
    until the chain stops shrinking.  Any Poisson ideal ``P ⊆ J`` generated in
    degree <= D lies in every ``I_k`` (induction), which is what the
    certificate's maximality clause records.

    The generating set ``W_k`` of ``I_{k+1}`` is a subspace closed under
    multiplication by monomials (within degree D), and every degree <= D
    element of ``I_{k+1}`` already satisfies the defining condition, so
    ``W_k`` is all of ``I_{k+1}`` in degree <= D.  Hence the chain is stable
    exactly when ``dim W_k == dim W_{k-1}``.

    ``method="groebner"`` runs the chain with normal forms.  ``"dual"``
    needs bracket entries of degree <= 1 and ``J`` generated in degree <= D;
    then ``{x_i, -}`` preserves degree <= D and ``W_k`` is the annihilator of
    the functionals reached from ``J``'s annihilator by at most ``k+1``
    transposed brackets, which is far cheaper over symbolic fields.
    ``"auto"`` picks ``"dual"`` whenever it applies.  Both report the same
    iteration count.
    """
    n, D = S.n, degree_bound
    if J.n != n:
        raise ValidationError("ideal and structure have different variable counts")
    if method not in ("auto", "dual", "groebner"):
        raise ValidationError(f"unknown core method {method!r}")
    if J.is_unit():
        raise ValidationError("the ideal must be proper")
    order = DEGREVLEX
    current = J.with_order(order)
    dual_ok = (all(p.total_degree() <= 1 for p in S.table.values())
               and all(g.total_degree() <= D for g in current.groebner()))
    if method == "dual" and not dual_ok:
        raise ValidationError("the dual method needs a linear structure and J generated in degree <= D")
    if method == "groebner" or not dual_ok:
        core, it = _core_chain(current, S, D, max_iter)
    else:
        core, it = _core_dual(current, S, D, max_iter)
    cert = CoreCertificate(
        poisson_verified=is_poisson_ideal(core, S),
        contained_verified=J.contains_ideal(core),
        degree_bound=D,
        iterations=it,
        maximal_among=f"Poisson ideals contained in J generated in degree <= {D}",
    )
    return core, cert


def _core_chain(current: IdealPresentation, S: PoissonStructure, D: int, max_iter: int):
    n, order = S.n, current.order
    monos = sorted(monomials_up_to(n, D), key=order.key, reverse=True)
    V = _truncation(current.groebner(), n, D, order)
    # I_0 = J is generated by V only if J has generators of degree <= D
    generated_by_V = all(g.total_degree() <= D for g in current.groebner())
    xs = [S.variable(i) for i in range(n)]
    for it in range(1, max_iter + 1):
        images = []
        for f in V:
            row = {}
            for i, x in enumerate(xs):
                for m, c in current.normal_form(bracket(S, x, f)).terms.items():
                    row[(i, m)] = c
            images.append(row)
        cols = sorted({k for row in images for k in row})
        # kernel of f -> (NF{x_i, f})_i on the span of V
        if cols:
            matrix = [[images[r].get(col, 0) for r in range(len(V))] for col in cols]
            W = []
            for v in nullspace(matrix, len(V)):
                W.append(poly_sum((b.scale(c) for c, b in zip(v, V) if c != 0), n))
            W = _echelon(W, monos)
        else:
            W = list(V)
        if generated_by_V and len(W) == len(V):
            return current, it
        V, generated_by_V = W, True
        current = IdealPresentation(W, order, n, current.degree_cap)
    raise NotStabilized(f"core chain did not stabilize within {max_iter} iterations")


def _core_dual(current: IdealPresentation, S: PoissonStructure, D: int, max_iter: int):
    n, order = S.n, current.order
    monos = sorted(monomials_up_to(n, D), key=order.key, reverse=True)
    index = {m: k for k, m in enumerate(monos)}
    N = len(monos)
    # transposed brackets: (phi o ad_i)[m] = sum_m' phi[m'] * coeff of m' in {x_i, m}
    ad = []
    for i in range(n):
        x = S.variable(i)
        ad.append([[(index[t], c) for t, c in bracket(S, x, Polynomial.monomial(m)).terms.items()]
                   for m in monos])
    basis: list[tuple[int, list]] = []

    def insert(phi) -> list | None:
        phi = list(phi)
        for p, b in basis:
            c = phi[p]
            if c != 0:
                phi = [demote(a - c * e) if e != 0 else a for a, e in zip(phi, b)]
        p = next((k for k, a in enumerate(phi) if a != 0), None)
        if p is None:
            return None
        inv = inverse(phi[p])
        phi = [demote(a * inv) if a != 0 else a for a in phi]
        basis.append((p, phi))
        return phi

    V = _truncation(current.groebner(), n, D, order)
    rows = [[v.terms.get(m, 0) for m in monos] for v in V]
    frontier = [phi for phi in (insert(v) for v in nullspace(rows, N)) if phi is not None]
    for it in range(1, max_iter + 1):
        new = []
        for phi in frontier:
            for table in ad:
                psi = [poly_dot(phi, table[k]) for k in range(N)]
                got = insert(psi)
                if got is not None:
                    new.append(got)
        if not new:
            if it == 1:
                return current, it
            W = [Polynomial(n, {monos[k]: c for k, c in enumerate(v) if c != 0})
                 for v in nullspace([b for _, b in basis], N)]
            return IdealPresentation(_echelon(W, monos), order, n, current.degree_cap), it
        frontier = new
    raise NotStabilized(f"core chain did not stabilize within {max_iter} iterations")


def poly_dot(phi: Sequence, entries: Sequence[tuple[int, object]]):
    total = 0
    for k, c in entries:
        if phi[k] != 0:
            total = total + phi[k] * c
    return demote(total) if total != 0 else 0


def saturate_by_variables(I: IdealPresentation, variables: Sequence[int] | None = None) -> IdealPresentation:
    """``I : (x_v1 ... x_vk)^infinity`` by elimination of an auxiliary variable."""
    n = I.n
    vs = list(range(n)) if variables is None else list(variables)
    lift = []
    for g in I.groebner():
        lift.append(Polynomial(n + 1, {(0,) + m: c for m, c in g.terms.items()}))
    t_prod = tuple([1] + [int(k in vs) for k in range(n)])
    lift.append(Polynomial(n + 1, {t_prod: 1, (0,) * (n + 1): -1}))
    gb = buchberger(lift, LEX, I.degree_cap)
    kept = [Polynomial(n, {m[1:]: c for m, c in g.terms.items()}) for g in gb
            if all(m[0] == 0 for m in g.terms)]
    return IdealPresentation(kept, I.order, n, I.degree_cap)


def variable_ideal(n: int, indices: Sequence[int]) -> IdealPresentation:
    return IdealPresentation([Polynomial.variable(n, i) for i in indices], DEGREVLEX, n)


def point_ideal(point: Sequence) -> IdealPresentation:
    n = len(point)
    return IdealPresentation([Polynomial.variable(n, i) - point[i] for i in range(n)], DEGREVLEX, n)


def monomial_minimal_primes(monomials: Sequence[Monomial]) -> list[frozenset[int]]:
    """Minimal primes of a monomial ideal: the minimal sets of variables that
    meet the support of every generator."""
    supports = [frozenset(k for k, e in enumerate(m) if e) for m in monomials]
    if any(not s for s in supports):
        return []  # unit ideal
    n = len(monomials[0]) if monomials else 0
    covers: list[frozenset[int]] = []
    for size in range(n + 1):
        for S in combinations(range(n), size):
            S = frozenset(S)
            if all(S & sup for sup in supports) and not any(c <= S for c in covers):
                covers.append(S)
    return covers
