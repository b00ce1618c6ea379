"""JSON configuration documents.

A document names its parameters and symbols, then describes one algebra::

    {
      "name": "sl2",
      "parameters": {"free": ["t"], "torsion": [["s", 2]]},
      "symbols": ["alpha"],
      "algebra": {"kind": "pbw", "generators": [...], ...},
      "dual": {"t": "1"}
    }

Algebra kinds and their fields:

``pbw``
    ``generators``, optional ``weights``, ``inverted``, ``degree_cap``;
    ``relations``: ``{"left": a, "right": b, "coefficient": c, "tail": p}``
    meaning ``a*b = c*b*a + p``; ``rules``: ``{"lhs": m, "rhs": p}``.
``qaffine`` / ``qtorus``
    ``generators`` and ``relations`` whose coefficients are parameter
    monomials (``"q^-1*p"``); no tails.  ``qtorus`` inverts every generator.
``poisson_affine``
    ``generators`` and ``pi``, an antisymmetric matrix: ``{x_i, x_j} = pi_ij x_i x_j``.
``poisson_table``
    ``generators``, ``brackets``: ``{"left", "right", "value"}``, optional ``laurent``.
``lie``
    ``generators`` and ``brackets`` whose values are linear combinations.

Scalars and polynomials use the grammar of :mod:`semiclassical.expr`.  Any
other top-level key (``points``, ``ideals``, ``guided``, ...) is kept verbatim
in :attr:`Config.extra` for the commands that use it.
"""
from __future__ import annotations

import json
from itertools import combinations
from pathlib import Path
from typing import Mapping

from .core.field import format_field, inverse, symbol_field, to_field
from .core.groups import GroupElement, GroupScalar, ParamGroup
from .core.rings import FieldRing, GroupRing
from .errors import ValidationError
from .expr import evaluate, evaluate_terms, parse
from .ideals import IdealPresentation, MonomialOrder
from .pbw import PBWPresentation, dual_specialize, homogenized_enveloping, semiclassical_bracket
from .poisson import LieStructureConstants, PoissonStructure, kks_structure
from .polynomial import Polynomial, format_monomial, format_terms, print_key
from .spectra import QTorusPresentation, canonical_json

KINDS = ("pbw", "qaffine", "qtorus", "poisson_affine", "poisson_table", "lie")
_KNOWN = {"name", "parameters", "symbols", "algebra", "dual"}


def _require(doc: Mapping, key: str, where: str):
    if key not in doc:
        raise ValidationError(f"{where}: missing field {key!r}")
    return doc[key]


class Config:
    def __init__(self, doc: Mapping, source: str | None = None):
        if not isinstance(doc, Mapping):
            raise ValidationError("a configuration document must be a JSON object")
        self.source = source
        self.name = str(doc.get("name", Path(source).stem if source else "config"))
        params = doc.get("parameters", {}) or {}
        try:
            self.group = ParamGroup(tuple(params.get("free", ())),
                                    tuple((str(a), int(b)) for a, b in params.get("torsion", ())))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"bad parameters block: {exc}") from None
        syms = tuple(doc.get("symbols", ()) or ())
        self.field = symbol_field(syms) if syms else None
        self.symbols = dict(zip(syms, self.field.gens)) if syms else {}
        clash = set(self.symbols) & set(self.group.names)
        if clash:
            raise ValidationError(f"names declared as both parameter and symbol: {sorted(clash)}")
        alg = _require(doc, "algebra", "document")
        self.kind = _require(alg, "kind", "algebra")
        if self.kind not in KINDS:
            raise ValidationError(f"unknown algebra kind {self.kind!r}; expected one of {KINDS}")
        self.generators = tuple(_require(alg, "generators", "algebra"))
        if len(set(self.generators)) != len(self.generators):
            raise ValidationError("generator names must be unique")
        reserved = (set(self.symbols) | set(self.group.names) | {"eps"}) & set(self.generators)
        if reserved:
            raise ValidationError(f"generator names clash with parameters or symbols: {sorted(reserved)}")
        self.index = {g: k for k, g in enumerate(self.generators)}
        self.dual = None
        if doc.get("dual") is not None:
            unknown = set(doc["dual"]) - set(self.group.free)
            if unknown:
                raise ValidationError(f"dual block names unknown parameters: {sorted(unknown)}")
            self.dual = {p: self.field_scalar(doc["dual"][p]) for p in self.group.free if p in doc["dual"]}
        self.extra = {k: v for k, v in doc.items() if k not in _KNOWN}
        self.pbw: PBWPresentation | None = None
        self.qtorus: QTorusPresentation | None = None
        self.poisson: PoissonStructure | None = None
        self.lie: LieStructureConstants | None = None
        self.pi = None
        getattr(self, f"_build_{self.kind}")(alg)

    # scalars

    def _field_leaf(self, name: str):
        if name in self.symbols:
            return self.symbols[name]
        raise ValidationError(f"undeclared name {name!r}")

    def field_scalar(self, text):
        if isinstance(text, (int, float)) and not isinstance(text, bool):
            if isinstance(text, float) and not text.is_integer():
                raise ValidationError(f"write non-integer numbers as fractions, got {text}")
            return to_field(int(text), self.field)
        return evaluate(parse(str(text)), self._field_leaf, lambda x: to_field(x, self.field), inverse)

    def group_ring(self) -> GroupRing:
        return GroupRing(self.group, self.field)

    def _group_leaf(self, name: str):
        if name in self.group.names:
            return GroupScalar.from_element(self.group.gen(name))
        return GroupScalar.constant(self.group, self._field_leaf(name))

    def group_scalar(self, text) -> GroupScalar:
        ring = self.group_ring()
        return evaluate(parse(str(text)), self._group_leaf, ring.coerce, ring.inv)

    def group_element(self, text) -> GroupElement:
        s = self.group_scalar(text)
        if len(s.terms) != 1:
            raise ValidationError(f"{text!r} is not a parameter monomial")
        ((key, c),) = s.terms.items()
        if c != 1:
            raise ValidationError(f"{text!r} is not a parameter monomial (coefficient {format_field(c)})")
        k = self.group.free_rank
        return self.group.element(key[:k], key[k:])

    def _terms(self, text, ring, scalar_leaf):
        return evaluate_terms(str(text), self.index, len(self.generators), scalar_leaf, ring.coerce, ring.inv)

    def _pair(self, rel: Mapping, where: str) -> tuple[int, int]:
        a, b = _require(rel, "left", where), _require(rel, "right", where)
        for g in (a, b):
            if g not in self.index:
                raise ValidationError(f"{where}: unknown generator {g!r}")
        if a == b:
            raise ValidationError(f"{where}: a relation needs two different generators")
        return self.index[a], self.index[b]

    # builders

    def _build_pbw(self, alg):
        ring = self.group_ring() if self.group.names else FieldRing(self.field)
        leaf = self._group_leaf if self.group.names else self._field_leaf
        inverted = [self.index[g] for g in alg.get("inverted", ())]
        swap, tails = {}, {}
        for rel in alg.get("relations", ()):
            a, b = self._pair(rel, "relation")
            c = ring.coerce(self._terms(rel.get("coefficient", "1"), ring, leaf).scalar())
            tail = self._terms(rel.get("tail", "0"), ring, leaf).terms
            if not ring.is_unit(c):
                raise ValidationError(f"relation coefficient {rel.get('coefficient')!r} is not a unit")
            if a > b:  # b*a = c*a*b + t  <=>  a*b = c^-1*b*a - c^-1*t
                ci = ring.inv(c)
                a, b, c = b, a, ci
                tail = {m: -(ci * v) for m, v in tail.items()}
            if (a, b) in swap:
                raise ValidationError(f"two relations for ({self.generators[a]},{self.generators[b]})")
            swap[(a, b)] = c
            if tail:
                tails[(a, b)] = tail
        rules = []
        for rule in alg.get("rules", ()):
            lhs = self._terms(_require(rule, "lhs", "rule"), ring, leaf).terms
            if len(lhs) != 1 or next(iter(lhs.values())) != ring.one:
                raise ValidationError(f"rule left side {rule['lhs']!r} must be a monomial")
            rhs = self._terms(_require(rule, "rhs", "rule"), ring, leaf).terms
            rules.append((next(iter(lhs)), rhs))
        kwargs = {}
        if "degree_cap" in alg:
            kwargs["degree_cap"] = int(alg["degree_cap"])
        self.pbw = PBWPresentation(self.generators, ring, swap, tails, rules, inverted,
                                   alg.get("weights"), params=self.dual and {"dual": self.dual}, **kwargs)

    def _build_qaffine(self, alg, inverted=False):
        q = {}
        for rel in alg.get("relations", ()):
            a, b = self._pair(rel, "relation")
            if "tail" in rel and str(rel["tail"]).strip() != "0":
                raise ValidationError("quantum affine relations have no tails")
            g = self.group_element(rel.get("coefficient", "1"))
            if a > b:
                a, b, g = b, a, g.inverse()
            if (a, b) in q:
                raise ValidationError(f"two relations for ({self.generators[a]},{self.generators[b]})")
            q[(a, b)] = g
        self.qtorus = QTorusPresentation(self.group, self.generators, q)
        ring = self.group_ring()
        n = len(self.generators)
        self.pbw = PBWPresentation(self.generators, ring,
                                   {k: GroupScalar.from_element(g) for k, g in q.items()}, {}, (),
                                   list(range(n)) if inverted else (), alg.get("weights"),
                                   params=self.dual and {"dual": self.dual})

    def _build_qtorus(self, alg):
        self._build_qaffine(alg, inverted=True)

    def _build_poisson_affine(self, alg):
        n = len(self.generators)
        rows = _require(alg, "pi", "algebra")
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValidationError("pi must be an n x n matrix")
        self.pi = tuple(tuple(self.field_scalar(x) for x in r) for r in rows)
        laurent = [self.index[g] for g in alg.get("laurent", ())]
        self.poisson = PoissonStructure.from_log_linear(self.generators, self.pi, laurent)

    def _build_poisson_table(self, alg):
        ring = FieldRing(self.field)
        n = len(self.generators)
        table = {}
        for br in alg.get("brackets", ()):
            a, b = self._pair(br, "bracket")
            value = self._terms(_require(br, "value", "bracket"), ring, self._field_leaf)
            table[(a, b)] = Polynomial(n, value.terms)
        laurent = [self.index[g] for g in alg.get("laurent", ())]
        self.poisson = PoissonStructure(self.generators, table, laurent).with_log_linear()
        self.pi = self.poisson.log_linear

    def _build_lie(self, alg):
        ring = FieldRing(self.field)
        n = len(self.generators)
        constants = {}
        for br in alg.get("brackets", ()):
            a, b = self._pair(br, "bracket")
            value = self._terms(_require(br, "value", "bracket"), ring, self._field_leaf)
            vec = [0] * n
            for m, c in value.terms.items():
                if sum(m) != 1 or any(e < 0 for e in m):
                    raise ValidationError("Lie brackets must be linear combinations of generators")
                vec[m.index(1)] = c
            if (a, b) in constants or (b, a) in constants:
                raise ValidationError("two brackets for one pair")
            constants[(a, b)] = tuple(vec)
        self.lie = LieStructureConstants(n, constants, self.generators)
        self.poisson = kks_structure(self.lie)
        self.pbw = homogenized_enveloping(self.lie)

    def polynomial(self, text, values: Mapping | None = None) -> Polynomial:
        """A commutative polynomial in the generators over the symbol field;
        ``values`` substitutes field elements for some symbols."""
        ring = FieldRing(self.field)
        leaf = self._field_leaf
        if values:
            leaf = lambda name: to_field(values[name]) if name in values else self._field_leaf(name)
        terms = self._terms(text, ring, leaf).terms
        if any(e < 0 for m in terms for e in m):
            raise ValidationError(f"negative exponent in {text!r}")
        return Polynomial(len(self.generators), terms)

    def ideals(self) -> list[tuple[str, IdealPresentation, IdealPresentation | None]]:
        """The ``ideals`` block: ``(name, ideal, declared core or None)``."""
        out = []
        for k, item in enumerate(self.extra.get("ideals", ())):
            name = str(item.get("name", f"ideal {k + 1}"))
            order = _order(item.get("order", "degrevlex"), len(self.generators))
            n = len(self.generators)
            J = IdealPresentation([self.polynomial(g) for g in _require(item, "generators", name)], order, n)
            core = None
            if "core" in item:
                core = IdealPresentation([self.polynomial(g) for g in item["core"]], order, n)
            out.append((name, J, core))
        return out

    # derived objects

    def limit(self) -> PoissonStructure:
        """The semiclassical limit of the PBW family (dual specialization)."""
        if self.pbw is None:
            raise ValidationError(f"a {self.kind} document has no quantized algebra")
        if self.kind == "lie":
            return semiclassical_bracket(self.pbw)
        if self.dual is None:
            raise ValidationError("the limit needs a 'dual' block (parameter derivatives)")
        return semiclassical_bracket(dual_specialize(self.pbw, self.dual))

    def poisson_structure(self) -> PoissonStructure:
        return self.poisson if self.poisson is not None else self.limit()

    def log_linear_matrix(self):
        S = self.poisson_structure()
        if S.log_linear is None:
            raise ValidationError("the Poisson structure is not log-linear")
        return S.log_linear

    # serialization

    def _scalar_text(self, x) -> str:
        return self.pbw.ring.text(x) if self.pbw is not None else format_field(x)

    def _terms_text(self, terms: Mapping, ring) -> str:
        if not terms:
            return "0"
        names = self.generators
        parts = []
        for k, m in enumerate(sorted(terms, key=print_key)):
            parts.append(ring.term(terms[m], format_monomial(m, names), first=k == 0))
        return "".join(parts)

    def to_document(self) -> dict:
        doc: dict = {"name": self.name}
        if self.group.names:
            doc["parameters"] = {"free": list(self.group.free),
                                 "torsion": [[a, b] for a, b in self.group.torsion]}
        if self.symbols:
            doc["symbols"] = list(self.symbols)
        alg: dict = {"kind": self.kind, "generators": list(self.generators)}
        g = self.generators
        if self.kind == "pbw":
            p = self.pbw
            rels = []
            for i, j in combinations(range(p.n), 2):
                c, t = p.c(i, j), p.tail(i, j)
                if c != p.ring.one or t:
                    rel = {"left": g[i], "right": g[j], "coefficient": p.ring.text(c)}
                    if t:
                        rel["tail"] = self._terms_text(t, p.ring)
                    rels.append(rel)
            alg["relations"] = rels
            alg["rules"] = [{"lhs": p.format_monomial(L), "rhs": self._terms_text(rhs, p.ring)}
                            for L, rhs in p.rules]
            alg["weights"] = list(p.weights)
            if p.inverted:
                alg["inverted"] = [g[k] for k in sorted(p.inverted)]
            alg["degree_cap"] = p.degree_cap
        elif self.kind in ("qaffine", "qtorus"):
            T = self.qtorus
            alg["relations"] = [{"left": g[i], "right": g[j], "coefficient": str(T.entry(i, j))}
                                for i, j in combinations(range(T.n), 2) if not T.entry(i, j).is_identity()]
            alg["weights"] = list(self.pbw.weights)
        elif self.kind == "poisson_affine":
            alg["pi"] = [[format_field(x) for x in r] for r in self.pi]
            if self.poisson.laurent:
                alg["laurent"] = [g[k] for k in sorted(self.poisson.laurent)]
        elif self.kind == "poisson_table":
            alg["brackets"] = [{"left": g[i], "right": g[j], "value": p.format(g)}
                               for (i, j), p in sorted(self.poisson.table.items())]
            if self.poisson.laurent:
                alg["laurent"] = [g[k] for k in sorted(self.poisson.laurent)]
        else:
            alg["brackets"] = [{"left": g[i], "right": g[j],
                                "value": format_terms({tuple(int(k == l) for k in range(len(g))): v
                                                       for l, v in enumerate(vec) if v != 0}, g)}
                               for (i, j), vec in sorted(self.lie.constants.items())]
        doc["algebra"] = alg
        if self.dual is not None:
            doc["dual"] = {p: format_field(v) for p, v in self.dual.items()}
        doc.update(self.extra)
        return doc

    def dumps(self) -> str:
        return canonical_json(self.to_document())

    def same_presentation(self, other: "Config") -> bool:
        return (self.kind == other.kind and self.generators == other.generators
                and self.group == other.group and self.pbw == other.pbw
                and self.qtorus == other.qtorus and self.poisson == other.poisson
                and self.lie == other.lie and self.dual == other.dual)


def _order(spec, n: int) -> MonomialOrder:
    if isinstance(spec, Mapping):
        weights = spec.get("weights")
        if weights is not None and len(weights) != n:
            raise ValidationError("order weights need one entry per generator")
        return MonomialOrder(spec.get("kind", "weighted"), tuple(weights) if weights else None)
    return MonomialOrder(str(spec))


def load_config(path) -> Config:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return Config(doc, str(path))


def loads_config(text: str, source: str | None = None) -> Config:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return Config(doc, source)
