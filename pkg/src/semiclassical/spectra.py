"""Centers of quantum and Poisson tori, support strata, cores and posets.

A prime of a quantum (or Poisson) affine space is sorted by its support: the
set ``W`` of generators it does *not* contain.  Primes with support ``W``
correspond to primes of the torus on ``W``, hence to primes of that torus's
center, a Laurent ring in ``rank`` variables.  Each stratum contributes

* ``MIN(W)``: the prime ``<x_i : i not in W>`` (height 0 in the stratum);
* for rank 1, ``FAM(W)``: the family ``x^(m+) - lambda*x^(m-)``, lambda in k^x;
* for rank >= 2, ``OPQ(W)``: the rest of the stratum as one opaque node.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Mapping, Sequence

from .core.field import FieldElement, rational_rows, to_field
from .core.groups import GroupElement, ParamGroup
from .core.lattice import LatticeBasis, kernel_lattice
from .errors import ValidationError
from .ideals import IdealPresentation, saturate_by_variables
from .polynomial import Polynomial, format_monomial

SINGLETON = "singleton"
FAMILY_UNITS = "family over k×"
FAMILY_LINE = "family over k"


def opaque(rank: int) -> str:
    return f"opaque-spec({rank})"


class QTorusPresentation:
    """``k<x_i^(±1)> / (x_i x_j = q_ij x_j x_i)`` with ``q_ij`` in a parameter group."""

    def __init__(self, group: ParamGroup, names: Sequence[str],
                 q: Mapping[tuple[int, int], GroupElement]):
        self.group = group
        self.names = tuple(names)
        self.n = n = len(self.names)
        table: dict[tuple[int, int], GroupElement] = {}
        for (i, j), g in q.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"bad index pair {(i, j)}")
            if g.group != group:
                raise ValidationError("q-matrix entry from a different parameter group")
            if i == j:
                if not g.is_identity():
                    raise ValidationError("q_ii must be the identity")
                continue
            if i > j:
                i, j, g = j, i, g.inverse()
            if (i, j) in table and table[(i, j)] != g:
                raise ValidationError(f"q_{i + 1}{j + 1} and q_{j + 1}{i + 1} are not inverse")
            table[(i, j)] = g
        self.q = table

    def __eq__(self, other):
        if not isinstance(other, QTorusPresentation):
            return NotImplemented
        ident = self.group.identity()
        return (self.group == other.group and self.names == other.names
                and {k: g for k, g in self.q.items() if g != ident}
                == {k: g for k, g in other.q.items() if g != ident})

    __hash__ = None

    def entry(self, i: int, j: int) -> GroupElement:
        if i == j:
            return self.group.identity()
        if i < j:
            return self.q.get((i, j), self.group.identity())
        return self.entry(j, i).inverse()

    def restrict(self, indices: Sequence[int]) -> "QTorusPresentation":
        idx = list(indices)
        return QTorusPresentation(self.group, [self.names[i] for i in idx],
                                  {(a, b): self.entry(i, j) for a, i in enumerate(idx)
                                   for b, j in enumerate(idx) if a < b})

    @classmethod
    def from_exponents(cls, names: Sequence[str], a, generator: str = "g") -> "QTorusPresentation":
        """Single-parameter torus ``q_ij = g^(a_ij)``."""
        G = ParamGroup((generator,))
        n = len(names)
        return cls(G, names, {(i, j): G.element((int(a[i][j]),)) for i in range(n) for j in range(i + 1, n)})


def qtorus_center(T: QTorusPresentation) -> LatticeBasis:
    """Exponents of central monomials: ``prod_j q_ij^(m_j) = 1`` for all ``i``."""
    G, n = T.group, T.n
    rows, moduli = [], []
    for i in range(n):
        for g in range(G.free_rank):
            rows.append([T.entry(i, j).exponents[g] for j in range(n)])
            moduli.append(0)
        for t, order in enumerate(G.torsion_orders):
            rows.append([T.entry(i, j).torsion_exponents[t] for j in range(n)])
            moduli.append(order)
    return kernel_lattice(rows, moduli, n)


def qtorus_is_simple(T: QTorusPresentation) -> bool:
    return not qtorus_center(T)


def _integer_rows(pi) -> list[list[int]]:
    """Rational linear conditions equivalent to ``pi m = 0`` for integer ``m``."""
    out = []
    for row in pi:
        for r in rational_rows(list(row)):
            den = lcm(*(Fraction(x).denominator for x in r)) if r else 1
            ints = [int(Fraction(x) * den) for x in r]
            if any(ints):
                out.append(ints)
    return out


def ptorus_center(pi) -> LatticeBasis:
    """Exponents of Poisson-central monomials: ``sum_j pi_ij m_j = 0`` for all ``i``."""
    pi = [list(r) for r in pi]
    n = len(pi)
    if any(len(r) != n for r in pi):
        raise ValidationError("pi must be square")
    for i in range(n):
        for j in range(n):
            if pi[i][j] != -pi[j][i]:
                raise ValidationError("pi must be antisymmetric")
    return kernel_lattice(_integer_rows(pi), None, n)


def _restrict_matrix(pi, W):
    return [[pi[i][j] for j in W] for i in W]


def _embed(basis: LatticeBasis, W: Sequence[int], n: int) -> LatticeBasis:
    out = []
    for v in basis:
        full = [0] * n
        for k, i in enumerate(W):
            full[i] = v[k]
        out.append(tuple(full))
    return tuple(out)


@dataclass(frozen=True)
class Stratum:
    support: tuple[int, ...]
    center_basis: LatticeBasis  # full-length vectors, zero outside the support

    @property
    def center_rank(self) -> int:
        return len(self.center_basis)


def enumerate_strata(kind: str, data, always: Sequence[int] = ()) -> list[Stratum]:
    """One stratum per support ``W`` (containing ``always``), largest supports first."""
    if kind == "quantum":
        if not isinstance(data, QTorusPresentation):
            raise ValidationError("quantum strata need a QTorusPresentation")
        n = data.n
        center = lambda W: qtorus_center(data.restrict(W))
    elif kind == "poisson":
        pi = [list(r) for r in data]
        n = len(pi)
        center = lambda W: ptorus_center(_restrict_matrix(pi, W))
    else:
        raise ValidationError(f"unknown strata kind {kind!r}")
    fixed = set(always)
    free = [i for i in range(n) if i not in fixed]
    strata = []
    for size in range(len(free), -1, -1):
        for extra in combinations(free, size):
            W = tuple(sorted(fixed | set(extra)))
            basis = center(W) if W else ()
            strata.append(Stratum(W, _embed(basis, W, n)))
    return strata


@dataclass(frozen=True)
class Node:
    kind: str  # MIN, FAM or OPQ
    support: tuple[int, ...]
    height: int
    cardinality_class: str
    generators: tuple[str, ...]
    primitive: bool
    basis: LatticeBasis = ()


def _split(m: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(max(e, 0) for e in m), tuple(max(-e, 0) for e in m)


def _first_var(text: str, names: Sequence[str]) -> int:
    hits = [k for k, name in enumerate(names) if _mentions(text, name)]
    return min(hits) if hits else len(names)


def _mentions(text: str, name: str) -> bool:
    return re.search(rf"(?<![A-Za-z0-9_]){re.escape(name)}(?![A-Za-z0-9_])", text) is not None


def _order_generators(gens: Sequence[str], names: Sequence[str]) -> tuple[str, ...]:
    return tuple(sorted(gens, key=lambda g: (_first_var(g, names), g)))


def binomial_text(m: Sequence[int], names: Sequence[str], coeff: str = "lambda") -> str:
    plus, minus = _split(m)
    a = format_monomial(plus, names) or "1"
    b = format_monomial(minus, names)
    return f"{a} - {coeff}" if b is None else f"{a} - {coeff}*{b}"


def stratum_nodes(s: Stratum, names: Sequence[str]) -> list[Node]:
    n = len(names)
    killed = [names[i] for i in range(n) if i not in s.support]
    base = _order_generators(killed, names) or ("0",)
    nodes = [Node("MIN", s.support, 0, SINGLETON, base, s.center_rank == 0, s.center_basis)]
    if s.center_rank == 1:
        gens = _order_generators(killed + [binomial_text(s.center_basis[0], names)], names)
        nodes.append(Node("FAM", s.support, 1, FAMILY_UNITS, gens, True, s.center_basis))
    elif s.center_rank >= 2:
        monos = ", ".join(format_monomial(v, names) for v in s.center_basis)
        gens = _order_generators(killed + [f"f({monos})"], names)
        nodes.append(Node("OPQ", s.support, 1, opaque(s.center_rank), gens, True, s.center_basis))
    return nodes


def _meets(part: Sequence[int], outside: set[int]) -> bool:
    return any(part[i] for i in outside)


def node_leq(a: Node, b: Node, n: int) -> bool:
    """Closure order: some prime of ``a`` lies inside some prime of ``b``."""
    if a == b:
        return True
    V, W = set(b.support), set(a.support)
    if a.kind == "MIN":
        return V <= W
    if not V < W:
        return False
    outside = set(range(n)) - V
    if a.kind == "FAM":
        plus, minus = _split(a.basis[0])
        vanishes = _meets(plus, outside) and _meets(minus, outside)
        if b.kind == "FAM":
            support_m = {i for i, e in enumerate(a.basis[0]) if e}
            return vanishes or support_m <= V
        return vanishes
    # OPQ: approximated through its basis binomials
    if b.kind != "MIN":
        return True
    return any(_meets(p, outside) and _meets(q, outside) for p, q in map(_split, a.basis))


def _closure(n_nodes: int, rel: set[tuple[int, int]]) -> set[tuple[int, int]]:
    reach = {i: {j for (a, j) in rel if a == i} for i in range(n_nodes)}
    changed = True
    while changed:
        changed = False
        for i in range(n_nodes):
            extra = set().union(*(reach[j] for j in reach[i])) - reach[i] if reach[i] else set()
            if extra:
                reach[i] |= extra
                changed = True
    return {(i, j) for i in range(n_nodes) for j in reach[i] if i != j}


def _reduction(order: set[tuple[int, int]]) -> list[tuple[int, int]]:
    above = {}
    for a, b in order:
        above.setdefault(a, set()).add(b)
    return sorted((a, b) for (a, b) in order
                  if not any((c, b) in order for c in above[a]))


def _node_key(node: Node):
    return (-len(node.support), node.support, node.height)


class SpectrumPoset:
    """Labeled nodes with the strict order ``order`` (pairs ``(a, b)``, a < b);
    ``edges`` is its transitive reduction."""

    def __init__(self, names: Sequence[str], nodes: Sequence[Node], order: set[tuple[int, int]],
                 kind: str = ""):
        self.names = tuple(names)
        self.kind = kind
        perm = sorted(range(len(nodes)), key=lambda i: _node_key(nodes[i]))
        where = {old: new for new, old in enumerate(perm)}
        self.nodes = [nodes[i] for i in perm]
        self.order = {(where[a], where[b]) for a, b in order}
        for a, b in self.order:
            if (b, a) in self.order:
                raise ValidationError("node order has a cycle")
        self.edges = _reduction(self.order)

    @classmethod
    def from_strata(cls, strata: Sequence[Stratum], names: Sequence[str], kind: str = "") -> "SpectrumPoset":
        nodes = [node for s in strata for node in stratum_nodes(s, names)]
        n = len(names)
        rel = {(i, j) for i, a in enumerate(nodes) for j, b in enumerate(nodes)
               if i != j and node_leq(a, b, n)}
        return cls(names, nodes, _closure(len(nodes), rel), kind)

    def leq(self, a: int, b: int) -> bool:
        return a == b or (a, b) in self.order

    def primitive(self) -> "SpectrumPoset":
        keep = [i for i, node in enumerate(self.nodes) if node.primitive]
        idx = {old: new for new, old in enumerate(keep)}
        order = {(idx[a], idx[b]) for a, b in self.order if a in idx and b in idx}
        kind = f"{self.kind}-prim" if self.kind else "prim"
        return SpectrumPoset(self.names, [self.nodes[i] for i in keep], order, kind)

    def generic_point(self) -> int | None:
        """A node below every other node, if any."""
        for i in range(len(self.nodes)):
            if all(self.leq(i, j) for j in range(len(self.nodes))):
                return i
        return None

    def label(self, i: int) -> tuple[str, int]:
        return (self.nodes[i].cardinality_class, self.nodes[i].height)

    def node_text(self, i: int) -> str:
        return "<" + ", ".join(self.nodes[i].generators) + ">"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "variables": list(self.names),
            "nodes": [{
                "support": [self.names[i] for i in node.support],
                "height": node.height,
                "cardinality_class": node.cardinality_class,
                "generators": list(node.generators),
                "primitive": node.primitive,
            } for node in self.nodes],
            "edges": [list(e) for e in self.edges],
        }

    def dumps(self) -> str:
        return canonical_json(self.to_json())

    @classmethod
    def from_json(cls, doc: Mapping) -> "SpectrumPoset":
        try:
            names = list(doc["variables"])
            nodes = []
            for d in doc["nodes"]:
                support = tuple(sorted(names.index(s) for s in d["support"]))
                cls_ = d["cardinality_class"]
                kind = "MIN" if d["height"] == 0 else ("FAM" if cls_ in (FAMILY_UNITS, FAMILY_LINE) else "OPQ")
                nodes.append(Node(kind, support, int(d["height"]), cls_, tuple(d["generators"]),
                                  bool(d["primitive"])))
            edges = {(int(a), int(b)) for a, b in doc["edges"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed poset document: {exc}") from None
        if any(not (0 <= a < len(nodes) and 0 <= b < len(nodes)) for a, b in edges):
            raise ValidationError("edge index out of range")
        return cls(names, nodes, _closure(len(nodes), edges), doc.get("kind", ""))


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


@dataclass
class PosetComparison:
    isomorphic: bool
    bijection: dict[int, int] = field(default_factory=dict)
    witness: str = ""

    def lines(self, P: SpectrumPoset, Q: SpectrumPoset) -> list[str]:
        if not self.isomorphic:
            return ["MISMATCH", f"witness: {self.witness}"]
        return ["ISOMORPHIC"] + [f"{P.node_text(a)} -> {Q.node_text(b)}"
                                 for a, b in sorted(self.bijection.items())]


def poset_isomorphic(P: SpectrumPoset, Q: SpectrumPoset) -> PosetComparison:
    """Label- and order-preserving bijection between two posets, or a witness."""
    gp, gq = P.generic_point(), Q.generic_point()
    if (gp is None) != (gq is None):
        return PosetComparison(False, witness="generic point present on one side only")
    if len(P.nodes) != len(Q.nodes):
        return PosetComparison(False, witness=f"node counts differ: {len(P.nodes)} vs {len(Q.nodes)}")
    lp = sorted(P.label(i) for i in range(len(P.nodes)))
    lq = sorted(Q.label(i) for i in range(len(Q.nodes)))
    if lp != lq:
        return PosetComparison(False, witness="cardinality-class label multisets differ")
    N = len(P.nodes)

    def profile(X, i):
        return (X.label(i), sum(X.leq(j, i) for j in range(N)), sum(X.leq(i, j) for j in range(N)))

    cand = {i: [j for j in range(N) if profile(Q, j) == profile(P, i)] for i in range(N)}
    order = sorted(range(N), key=lambda i: len(cand[i]))
    assign: dict[int, int] = {}
    used: set[int] = set()

    def extend(k: int) -> bool:
        if k == N:
            return True
        i = order[k]
        for j in cand[i]:
            if j in used:
                continue
            if all(P.leq(i, a) == Q.leq(j, b) and P.leq(a, i) == Q.leq(b, j) for a, b in assign.items()):
                assign[i] = j
                used.add(j)
                if extend(k + 1):
                    return True
                del assign[i]
                used.discard(j)
        return False

    if extend(0):
        return PosetComparison(True, dict(sorted(assign.items())))
    return PosetComparison(False, witness="no order-preserving bijection of labeled nodes")


@dataclass(frozen=True)
class CoreDescriptor:
    support: tuple[int, ...]
    basis: LatticeBasis
    values: tuple[FieldElement, ...]

    @property
    def dimension(self) -> int:
        return len(self.support) - len(self.basis)


def _monomial_value(m: Sequence[int], point: Sequence):
    v = to_field(1)
    for x, e in zip(point, m):
        if e:
            v = v * to_field(x) ** e if e > 0 else v / to_field(x) ** (-e)
    return v


def symplectic_core(point: Sequence, pi) -> CoreDescriptor:
    """Core of the maximal ideal at ``point`` for ``{x_i, x_j} = pi_ij x_i x_j``:
    the point's support and the values of the support torus's central monomials."""
    pi = [list(r) for r in pi]
    n = len(pi)
    if len(point) != n:
        raise ValidationError("point and matrix sizes differ")
    pt = [to_field(x) for x in point]
    W = tuple(i for i, x in enumerate(pt) if x != 0)
    basis = _embed(ptorus_center(_restrict_matrix(pi, W)), W, n) if W else ()
    return CoreDescriptor(W, basis, tuple(_monomial_value(b, pt) for b in basis))


def same_core(p: Sequence, q: Sequence, pi) -> bool:
    return symplectic_core(p, pi) == symplectic_core(q, pi)


def core_ideal(desc: CoreDescriptor, n: int) -> IdealPresentation:
    """The ideal of the core's closure: killed variables and central binomials,
    saturated by the support variables."""
    gens = [Polynomial.variable(n, i) for i in range(n) if i not in desc.support]
    for b, v in zip(desc.basis, desc.values):
        plus, minus = _split(b)
        gens.append(Polynomial.monomial(plus) - Polynomial.monomial(minus, v))
    if not gens:
        return IdealPresentation([], n=n)
    I = IdealPresentation(gens, n=n)
    if desc.basis:
        I = saturate_by_variables(I, desc.support)
    return I
