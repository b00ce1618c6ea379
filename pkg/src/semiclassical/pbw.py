"""Rewriting engine for solvable polynomial rings.

Generators are ordered ``x_1 < ... < x_n``.  For ``i < j`` the relation

    x_i x_j = c_ji x_j x_i + p_ji

is read as the rewrite rule ``x_j x_i -> c_ji^-1 x_i x_j - c_ji^-1 p_ji``.
Here ``c_ji`` is a unit scalar and ``p_ji`` (the tail) a combination of
standard monomials strictly below ``x_i x_j``.  Extra rules ``L -> RHS``
(``L`` a standard monomial) present quotients such as ``D = 1`` for quantum
SL2.  Standard monomials are exponent vectors; negative entries are allowed
only on inverted generators, which must have zero tails.

Monomials are compared by weighted total degree and then lexicographically
with ``x_1`` most significant.  On words this is the (weighted degree,
inversion count, lex) order: standard words have no inversions.

In the dictionaries passed to :class:`PBWPresentation`, ``swap[(i, j)]`` and
``tails[(i, j)]`` are indexed with ``i < j``.
"""
from __future__ import annotations

import re
import sys
import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .core.field import common_field
from .core.groups import DualScalar, GroupScalar, dual_of
from .core.lattice import hermite_normal_form, rank as lattice_rank, saturate
from .core.rings import DualRing, GroupRing, ScalarRing
from .errors import (
    DegreeBoundExceeded,
    MathError,
    NotCommutativeLimit,
    ValidationError,
    ZeroDivisorInverse,
)
from .poisson import LieStructureConstants, PoissonStructure
from .polynomial import Polynomial, format_monomial, print_key

Monomial = tuple[int, ...]

DEFAULT_DEGREE_CAP = 24

if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)


def _add_into(acc: dict, mono, coeff):
    v = acc.get(mono)
    v = coeff if v is None else v + coeff
    if v:
        acc[mono] = v
    else:
        acc.pop(mono, None)


class PBWElement:
    """A combination of standard monomials with coefficients in the ring."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: "PBWPresentation", terms: Mapping[Monomial, object] | None = None):
        self.pres = pres
        self.terms = {tuple(m): c for m, c in (terms or {}).items() if c}

    def _other(self, other):
        if isinstance(other, PBWElement):
            if other.pres is not self.pres and other.pres != self.pres:
                raise ValueError("elements of different presentations")
            return other
        try:
            c = self.pres.ring.coerce(other)
        except (TypeError, ValueError, AttributeError):
            return None
        return PBWElement(self.pres, {self.pres.unit_monomial: c})

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        acc = dict(self.terms)
        for m, c in o.terms.items():
            _add_into(acc, m, c)
        return PBWElement(self.pres, acc)

    __radd__ = __add__

    def __neg__(self):
        return PBWElement(self.pres, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, PBWElement):
            return self.pres.multiply(self, other)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.pres.multiply(self, o)

    def __rmul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.pres.multiply(o, self)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, PBWElement):
            return self.terms == other.terms
        o = self._other(other)
        return o is not None and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def leading_monomial(self) -> Monomial | None:
        return max(self.terms, key=self.pres.order_key, default=None)

    def value_part(self) -> "dict[Monomial, object]":
        return {m: c.value for m, c in self.terms.items() if c.value != 0}

    def deriv_part(self) -> "dict[Monomial, object]":
        return {m: c.deriv for m, c in self.terms.items() if c.deriv != 0}

    def __str__(self):
        if not self.terms:
            return "0"
        ring, names = self.pres.ring, self.pres.names
        out = []
        for k, m in enumerate(sorted(self.terms, key=print_key)):
            out.append(ring.term(self.terms[m], format_monomial(m, names), first=k == 0))
        return "".join(out)

    __repr__ = __str__


@dataclass(frozen=True)
class Counterexample:
    """Two resolutions of one overlap word that reduce differently."""
    monomial: str
    nf1: PBWElement
    nf2: PBWElement

    def __str__(self):
        return f"overlap {self.monomial}: {self.nf1} != {self.nf2}"


class PBWPresentation:
    def __init__(self, names: Sequence[str], ring: ScalarRing,
                 swap: Mapping[tuple[int, int], object] | None = None,
                 tails: Mapping[tuple[int, int], Mapping[Monomial, object]] | None = None,
                 rules: Sequence[tuple[Monomial, Mapping[Monomial, object]]] = (),
                 inverted: Sequence[int] = (),
                 weights: Sequence[int] | None = None,
                 degree_cap: int = DEFAULT_DEGREE_CAP,
                 params: Mapping[str, object] | None = None):
        self.names = tuple(names)
        self.n = n = len(self.names)
        if len(set(self.names)) != n:
            raise ValidationError(f"generator names must be unique: {self.names}")
        self.ring = ring
        self.inverted = frozenset(inverted)
        self.weights = tuple(int(w) for w in (weights or [1] * n))
        if len(self.weights) != n or any(w <= 0 for w in self.weights):
            raise ValidationError("weights must be n positive integers")
        self.degree_cap = int(degree_cap)
        self.params = dict(params or {})
        self.unit_monomial = (0,) * n
        self.swap = {}
        for (i, j), c in (swap or {}).items():
            self._check_pair(i, j)
            self.swap[(i, j)] = ring.coerce(c)
        self.tails = {}
        for (i, j), t in (tails or {}).items():
            self._check_pair(i, j)
            t = {tuple(m): ring.coerce(c) for m, c in t.items() if c}
            if t:
                self.tails[(i, j)] = t
        self.rules = tuple((tuple(L), {tuple(m): ring.coerce(c) for m, c in rhs.items() if c})
                           for L, rhs in rules)
        self._validate()
        self._lock = threading.RLock()
        self._cache: dict = {}
        self.steps = 0

    # construction helpers

    def _check_pair(self, i, j):
        if not (0 <= i < j < self.n):
            raise ValidationError(f"relation pairs must satisfy 0 <= i < j < n, got {(i, j)}")

    def _e(self, *idx) -> Monomial:
        m = [0] * self.n
        for k in idx:
            m[k] += 1
        return tuple(m)

    def _standard(self, m: Monomial) -> bool:
        return len(m) == self.n and all(e >= 0 or k in self.inverted for k, e in enumerate(m))

    def _validate(self):
        for (i, j), c in self.swap.items():
            if not self.ring.is_unit(c):
                raise ValidationError(
                    f"swap coefficient of ({self.names[i]},{self.names[j]}) is not a unit: {c}")
        for (i, j), t in self.tails.items():
            if i in self.inverted or j in self.inverted:
                raise ValidationError(
                    f"inverted generator in a relation with a tail: ({self.names[i]},{self.names[j]})")
            top = self.order_key(self._e(i, j))
            for m in t:
                if not self._standard(m):
                    raise ValidationError(f"tail monomial {m} is not standard")
                if self.order_key(m) >= top:
                    raise ValidationError(
                        f"tail of ({self.names[i]},{self.names[j]}) has a monomial not below "
                        f"{self.names[i]}*{self.names[j]}")
        for L, rhs in self.rules:
            if len(L) != self.n or any(e < 0 for e in L) or not any(L):
                raise ValidationError(f"rule left side {L} must be a nonconstant monomial")
            for m in rhs:
                if not self._standard(m):
                    raise ValidationError(f"rule right side monomial {m} is not standard")
                if self.order_key(m) >= self.order_key(L):
                    raise ValidationError(
                        f"rule {self.format_monomial(L)} -> ... is not oriented by the weights")

    def order_key(self, m: Monomial):
        return (sum(w * e for w, e in zip(self.weights, m)), m)

    def c(self, i: int, j: int):
        """``c_ji`` for ``i < j``."""
        return self.swap.get((i, j), self.ring.one)

    def tail(self, i: int, j: int) -> dict:
        return self.tails.get((i, j), {})

    def format_monomial(self, m: Monomial) -> str:
        return format_monomial(m, self.names) or "1"

    def element(self, terms: Mapping[Monomial, object]) -> PBWElement:
        return PBWElement(self, {tuple(m): self.ring.coerce(c) for m, c in terms.items()})

    def one(self) -> PBWElement:
        return PBWElement(self, {self.unit_monomial: self.ring.one})

    def gen(self, i: int, power: int = 1) -> PBWElement:
        if power < 0 and i not in self.inverted:
            raise ValidationError(f"{self.names[i]} is not inverted")
        m = [0] * self.n
        m[i] = power
        return PBWElement(self, {tuple(m): self.ring.one})

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"unknown generator {name!r}") from None

    def __eq__(self, other):
        return (isinstance(other, PBWPresentation) and self.names == other.names
                and self.ring == other.ring and self.swap_table() == other.swap_table()
                and self.tails == other.tails and self.rules == other.rules
                and self.inverted == other.inverted and self.weights == other.weights)

    def __hash__(self):
        return hash((self.names, self.weights))

    def swap_table(self) -> dict:
        one = self.ring.one
        return {k: v for k, v in self.swap.items() if v != one}

    def stats(self) -> dict:
        return {"steps": self.steps, "cached_products": len(self._cache)}

    def fresh(self) -> "PBWPresentation":
        """A copy with an empty product cache."""
        return PBWPresentation(self.names, self.ring, self.swap, self.tails, self.rules,
                               self.inverted, self.weights, self.degree_cap, self.params)

    # multiplication

    def _check_degree(self, m: Monomial):
        if sum(abs(e) for e in m) > self.degree_cap:
            raise DegreeBoundExceeded(
                f"monomial {self.format_monomial(m)} exceeds the degree cap {self.degree_cap}")

    def _mono_mul(self, a: Monomial, b: Monomial) -> dict:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        result = self._mono_mul_uncached(a, b)
        self._cache[key] = result
        return result

    def _mono_mul_uncached(self, a: Monomial, b: Monomial) -> dict:
        n, ring = self.n, self.ring
        ja = max((k for k in range(n) if a[k]), default=-1)
        ib = min((k for k in range(n) if b[k]), default=n)
        prod = tuple(x + y for x, y in zip(a, b))
        if ja <= ib:
            self._check_degree(prod)
            return {prod: ring.one}
        crossing = [(l, k) for k in range(n) if a[k] for l in range(k) if b[l]]
        if all((l, k) not in self.tails for l, k in crossing):
            # q-commuting: x^a x^b = prod c_kl^(-a_k b_l) x^(a+b)
            self._check_degree(prod)
            coeff = ring.one
            for l, k in crossing:
                if (l, k) in self.swap:
                    coeff = coeff * ring.power(self.swap[(l, k)], -a[k] * b[l])
            self.steps += 1
            return {prod: coeff}
        j, i = ja, ib
        c = self.c(i, j)
        if (i, j) in self.tails:
            s = t = 1
            cinv = ring.inv(c)
            middle = {self._e(i, j): cinv}
            for m, v in self.tails[(i, j)].items():
                _add_into(middle, m, -(cinv * v))
        else:
            s, t = a[j], b[i]
            mm = [0] * n
            mm[i], mm[j] = t, s
            middle = {tuple(mm): ring.power(c, -s * t)}
        self.steps += 1
        a_rest = list(a)
        a_rest[j] -= s
        b_rest = list(b)
        b_rest[i] -= t
        left = self._raw({tuple(a_rest): ring.one}, middle)
        return self._raw(left, {tuple(b_rest): ring.one})

    def _raw(self, x: Mapping, y: Mapping) -> dict:
        acc: dict = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                cc = c1 * c2
                if not cc:
                    continue
                for m, v in self._mono_mul(m1, m2).items():
                    _add_into(acc, m, cc * v)
        return acc

    def _reduce(self, terms: dict) -> dict:
        if not self.rules:
            return terms
        elem = dict(terms)
        ring = self.ring
        while True:
            best, rule = None, None
            for m in elem:
                for L, rhs in self.rules:
                    if all(x >= y for x, y in zip(m, L)):
                        if best is None or self.order_key(m) > self.order_key(best):
                            best, rule = m, (L, rhs)
                        break
            if best is None:
                return elem
            L, rhs = rule
            u = tuple(x - y for x, y in zip(best, L))
            lhs = self._raw({u: ring.one}, {L: ring.one})
            lam = lhs.get(best)
            if lam is None or not ring.is_unit(lam):
                raise MathError(f"cannot orient rule application at {self.format_monomial(best)}")
            factor = elem[best] * ring.inv(lam)
            diff = dict(lhs)
            for m, v in self._raw({u: ring.one}, rhs).items():
                _add_into(diff, m, -v)
            for m, v in diff.items():
                _add_into(elem, m, -(factor * v))
            self.steps += 1

    def multiply(self, a: PBWElement, b: PBWElement) -> PBWElement:
        with self._lock:
            return PBWElement(self, self._reduce(self._raw(a.terms, b.terms)))

    def reduce(self, a: PBWElement) -> PBWElement:
        with self._lock:
            return PBWElement(self, self._reduce(dict(a.terms)))

    def parse_word(self, word) -> list[tuple[int, int]]:
        """Letters of ``"X22*X11"``, ``"x y^-1"`` or a list of such tokens."""
        tokens = re.split(r"[\s*]+", word.strip()) if isinstance(word, str) else list(word)
        letters = []
        for tok in tokens:
            if not tok:
                continue
            name, _, power = tok.partition("^")
            k = int(power) if power else 1
            letters.append((self.index(name), k))
        return letters

    def normal_form(self, word) -> PBWElement:
        result = self.one()
        for i, k in self.parse_word(word):
            result = self.multiply(result, self.gen(i, k))
        return result

    def commutator(self, i: int, j: int) -> PBWElement:
        xi, xj = self.gen(i), self.gen(j)
        return self.multiply(xi, xj) - self.multiply(xj, xi)


def normal_form(p: PBWPresentation, word) -> PBWElement:
    return p.normal_form(word)


def multiply(p: PBWPresentation, a: PBWElement, b: PBWElement) -> PBWElement:
    return p.multiply(a, b)


# confluence

def _word_text(p: PBWPresentation, letters) -> str:
    out = []
    for i, k in letters:
        out.append(p.names[i] if k == 1 else f"{p.names[i]}^{k}")
    return "*".join(out)


def _mono_letters(m: Monomial):
    return [(k, e) for k, e in enumerate(m) if e]


def check_confluence(p: PBWPresentation, degree_bound: int = 4) -> Counterexample | None:
    """Resolve every overlap ambiguity of degree at most ``degree_bound``.

    Overlaps are ``x_k x_j x_i`` for ``k > j > i`` (two relations sharing a
    letter), ``L x_i`` for each extra rule ``L`` and generator ``x_i`` (the
    rule and a relation overlapping at the last letter of ``L``), and lcm
    overlaps of pairs of extra rules.  Left multiples ``x_i L`` are resolved
    by construction of the reduction.
    """
    q = p.fresh()
    ring = q.ring
    one = ring.one
    gens = [(i, 1) for i in range(q.n)] + [(i, -1) for i in sorted(q.inverted)]

    def elem(terms):
        return PBWElement(q, terms)

    if degree_bound >= 3:
        for i, j, k in combinations(range(q.n), 3):
            xi, xj, xk = q.gen(i), q.gen(j), q.gen(k)
            left = q.multiply(q.multiply(xk, xj), xi)
            right = q.multiply(xk, q.multiply(xj, xi))
            if left != right:
                return Counterexample(_word_text(q, [(k, 1), (j, 1), (i, 1)]), left, right)
    for L, rhs in q.rules:
        if sum(L) + 1 > degree_bound:
            continue
        for i, k in gens:
            g = q.gen(i, k)
            via_rule = q.multiply(elem(rhs), g)
            via_pbw = q.multiply(elem({L: one}), g)
            if via_rule != via_pbw:
                return Counterexample(_word_text(q, _mono_letters(L) + [(i, k)]), via_rule, via_pbw)
            via_rule = q.multiply(g, elem(rhs))
            via_pbw = q.multiply(g, elem({L: one}))
            if via_rule != via_pbw:
                return Counterexample(_word_text(q, [(i, k)] + _mono_letters(L)), via_pbw, via_rule)
    for (L1, r1), (L2, r2) in combinations(q.rules, 2):
        M = tuple(max(x, y) for x, y in zip(L1, L2))
        if sum(M) > degree_bound:
            continue
        results = []
        with q._lock:
            for L, rhs in ((L1, r1), (L2, r2)):
                u = tuple(x - y for x, y in zip(M, L))
                lhs = q._raw({u: one}, {L: one})
                lam_inv = ring.inv(lhs[M])
                t = {M: one}
                for m, v in lhs.items():
                    _add_into(t, m, -(lam_inv * v))
                for m, v in q._raw({u: one}, rhs).items():
                    _add_into(t, m, lam_inv * v)
                results.append(elem(q._reduce(t)))
        if results[0] != results[1]:
            return Counterexample(q.format_monomial(M), results[0], results[1])
    return None


# semiclassical limits

def dual_specialize(p: PBWPresentation, d: Mapping[str, object]) -> PBWPresentation:
    """Specialize every parameter ``g`` to ``1 + d(g)*eps``."""
    if not isinstance(p.ring, GroupRing):
        raise ValidationError("dual specialization needs a group-scalar presentation")
    group = p.ring.group
    if not group.is_torsion_free:
        raise ValidationError("dual specialization needs a torsion-free parameter group")
    unknown = set(d) - set(group.free)
    if unknown:
        raise ValidationError(f"derivatives given for unknown parameters: {sorted(unknown)}")
    field = common_field(list(d.values())) or p.ring.field
    ring = DualRing(field)

    def conv(s: GroupScalar) -> DualScalar:
        return dual_of(s, d)

    swap = {}
    for (i, j), c in p.swap.items():
        dc = conv(c)
        if not dc.is_unit():
            raise ZeroDivisorInverse(
                f"swap coefficient of ({p.names[i]},{p.names[j]}) specializes to {dc}, not a unit")
        swap[(i, j)] = dc
    tails = {k: {m: conv(v) for m, v in t.items()} for k, t in p.tails.items()}
    rules = [(L, {m: conv(v) for m, v in rhs.items()}) for L, rhs in p.rules]
    return PBWPresentation(p.names, ring, swap, tails, rules, p.inverted, p.weights,
                           p.degree_cap, {"dual": dict(d)})


def semiclassical_bracket(p: PBWPresentation) -> PoissonStructure:
    """Brackets ``{x_i, x_j}`` = eps-part of the normal form of ``[x_i, x_j]``."""
    if not isinstance(p.ring, DualRing):
        raise ValidationError("semiclassical_bracket needs a presentation over dual numbers")
    table = {}
    for i, j in combinations(range(p.n), 2):
        comm = p.commutator(i, j)
        if comm.value_part():
            raise NotCommutativeLimit(i, j, p.names)
        table[(i, j)] = Polynomial(p.n, comm.deriv_part())
    return PoissonStructure(p.names, table, sorted(p.inverted)).with_log_linear()


def homogenized_enveloping(c: LieStructureConstants, weights=None) -> PBWPresentation:
    """Dual-number presentation ``x_i x_j - x_j x_i = eps * sum_l c^l_ij x_l``."""
    fields = [v.field for vec in c.constants.values() for v in vec if hasattr(v, "field")]
    ring = DualRing(fields[0] if fields else None)
    n = c.dim
    tails = {}
    for (i, j), vec in c.constants.items():
        tails[(i, j)] = {tuple(int(k == l) for k in range(n)): DualScalar(0, v)
                         for l, v in enumerate(vec) if v != 0}
    return PBWPresentation(c.names, ring, {}, tails, weights=weights)


# quotients

def quotient_by_generators(p: PBWPresentation, killed: Sequence[str | int]) -> PBWPresentation:
    """The presentation of ``A / <killed generators>``."""
    kill = {p.index(k) if isinstance(k, str) else int(k) for k in killed}
    keep = [k for k in range(p.n) if k not in kill]
    pos = {k: a for a, k in enumerate(keep)}

    def proj(terms):
        out = {}
        for m, v in terms.items():
            if all(m[k] == 0 for k in kill):
                out[tuple(m[k] for k in keep)] = v
        return out

    swap = {(pos[i], pos[j]): c for (i, j), c in p.swap.items() if i in pos and j in pos}
    tails = {}
    for (i, j), t in p.tails.items():
        if i in pos and j in pos:
            t2 = proj(t)
            if t2:
                tails[(pos[i], pos[j])] = t2
        else:
            pass  # x_i x_j - c x_j x_i = p becomes 0 = p mod killed
    rules = []
    for L, rhs in p.rules:
        if any(L[k] for k in kill):
            if proj(rhs):
                raise ValidationError("killing a generator of a rule left side leaves a relation "
                                      "that is not a rewrite rule")
            continue
        rules.append((tuple(L[k] for k in keep), proj(rhs)))
    for (i, j), t in p.tails.items():
        if not (i in pos and j in pos) and proj(t):
            raise ValidationError(
                f"killing generators leaves the relation 0 = tail of ({p.names[i]},{p.names[j]})")
    return PBWPresentation([p.names[k] for k in keep], p.ring, swap, tails, rules,
                           [pos[k] for k in p.inverted if k in pos], [p.weights[k] for k in keep],
                           p.degree_cap, p.params)


@dataclass(frozen=True)
class LaurentQuotient:
    rank: int
    relations: tuple[tuple[int, ...], ...]
    saturated: bool


def commutative_laurent_rank(p: PBWPresentation) -> LaurentQuotient:
    """For a commutative presentation whose generators are all units, the
    Krull dimension of ``k[x^(±1)] / (x^L - c)``, i.e. ``n - rank`` of the
    relation lattice.  ``saturated`` is False when the quotient group has
    torsion (the algebra is then not a Laurent polynomial ring)."""
    one = p.ring.one
    for (i, j), c in p.swap.items():
        if c != one:
            raise MathError(f"quotient is not commutative: ({p.names[i]},{p.names[j]})")
    if p.tails:
        (i, j) = next(iter(p.tails))
        raise MathError(f"quotient is not commutative: ({p.names[i]},{p.names[j]})")
    vectors = []
    units = set(p.inverted)
    for L, rhs in p.rules:
        if len(rhs) != 1:
            raise MathError(f"rule {p.format_monomial(L)} is not a binomial unit relation")
        ((R, v),) = rhs.items()
        if not p.ring.is_unit(v):
            raise MathError(f"rule {p.format_monomial(L)} has a non-unit coefficient")
        vectors.append(tuple(a - b for a, b in zip(L, R)))
    changed = True
    while changed:
        changed = False
        for L, rhs in p.rules:
            ((R, _),) = rhs.items()
            if all(k in units for k, e in enumerate(R) if e):
                new = {k for k, e in enumerate(L) if e} - units
                if new:
                    units |= new
                    changed = True
    if len(units) != p.n:
        missing = [p.names[k] for k in range(p.n) if k not in units]
        raise MathError(f"generators {missing} are not units in the quotient")
    rk = lattice_rank(vectors) if vectors else 0
    basis = hermite_normal_form(vectors, p.n) if vectors else ()
    sat = basis == saturate(vectors, p.n) if vectors else True
    return LaurentQuotient(p.n - rk, tuple(basis), sat)

