"""Guided spectra for algebras that are not quantum affine spaces.

The classification runs through the standard localization argument, with
every algebraic step recomputed from the presentation:

* the quotient by the ``kill`` generators must be a commutative Laurent
  algebra, whose rank is computed;
* each declared localization is read off the (quotient) presentation as a
  quantum torus, and its center is computed;
* the strata of the torus on the ``torus`` generators (keeping ``always``
  inverted) give the nodes, with the all-killed stratum checked against the
  Laurent rank of the quotient.

Only the text of a few node generators comes from the document (``gluing``):
for example the maximal ideals of quantum SL2 also involve ``X22``, which is
not a torus generator.  Declared generators must still mention every killed
variable of their stratum.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .config import Config
from .core.groups import GroupElement, GroupScalar
from .core.lattice import LatticeBasis
from .errors import MathError, ValidationError
from .pbw import LaurentQuotient, PBWPresentation, commutative_laurent_rank, quotient_by_generators
from .poisson import PoissonStructure
from .polynomial import format_monomial
from .spectra import (PosetComparison, QTorusPresentation, SpectrumPoset, enumerate_strata,
                      poset_isomorphic, qtorus_center)


def _as_element(s: GroupScalar, where: str) -> GroupElement:
    if len(s.terms) != 1:
        raise MathError(f"{where}: coefficient {s} is not a parameter monomial")
    ((key, c),) = s.terms.items()
    if c != 1:
        raise MathError(f"{where}: coefficient {s} is not a parameter monomial")
    k = s.group.free_rank
    return s.group.element(key[:k], key[k:])


def torus_from_pbw(p: PBWPresentation, generators: Sequence[str]) -> QTorusPresentation:
    """The quantum torus on ``generators``: their pairwise relations must be
    pure q-commutations (no tails)."""
    idx = [p.index(g) for g in generators]
    if sorted(idx) != idx:
        raise ValidationError("torus generators must be listed in presentation order")
    group = getattr(p.ring, "group", None)
    if group is None:
        raise ValidationError("a torus needs a group-scalar presentation")
    q = {}
    for a, i in enumerate(idx):
        for b in range(a + 1, len(idx)):
            j = idx[b]
            where = f"({p.names[i]},{p.names[j]})"
            if p.tail(i, j):
                raise MathError(f"{where}: relation has a tail, not a q-commutation")
            q[(a, b)] = _as_element(p.ring.coerce(p.c(i, j)), where)
    return QTorusPresentation(group, generators, q)


@dataclass
class Localization:
    name: str
    killed: tuple[str, ...]
    torus: QTorusPresentation
    center: LatticeBasis

    @property
    def simple(self) -> bool:
        return not self.center

    def line(self) -> str:
        names, parts = self.torus.names, []
        for i in range(self.torus.n):
            for j in range(i + 1, self.torus.n):
                g = self.torus.entry(i, j)
                coeff = "" if g.is_identity() else f"{g}*" if "*" not in str(g) else f"({g})*"
                parts.append(f"{names[i]}*{names[j]} = {coeff}{names[j]}*{names[i]}")
        rel = ", ".join(parts)
        where = f" mod <{', '.join(self.killed)}>" if self.killed else ""
        status = "simple" if self.simple else "center " + ", ".join(
            format_monomial(v, self.torus.names) for v in self.center)
        return f"{self.name}{where}: {rel}; {status}"


@dataclass
class GuidedResult:
    quotient: LaurentQuotient
    killed: tuple[str, ...]
    localizations: list[Localization]
    quantum: SpectrumPoset
    poisson: SpectrumPoset
    quantum_prim: SpectrumPoset
    poisson_prim: SpectrumPoset
    spec_match: PosetComparison = field(default=None)
    prim_match: PosetComparison = field(default=None)

    def lines(self) -> list[str]:
        out = [f"quotient by <{', '.join(self.killed)}>: commutative Laurent algebra of rank {self.quotient.rank}"]
        out += [loc.line() for loc in self.localizations]
        for title, P in (("spec", self.quantum), ("prim", self.quantum_prim)):
            out.append(f"{title} ({len(P.nodes)} nodes):")
            out += [f"  {P.node_text(i)}  [{P.nodes[i].cardinality_class}]" for i in range(len(P.nodes))]
        out.append("spec vs Poisson spec: " + self.spec_match.lines(self.quantum, self.poisson)[0])
        out.append("prim vs Poisson prim: " + self.prim_match.lines(self.quantum_prim, self.poisson_prim)[0])
        return out


def _names(cfg: Config, items, what: str) -> tuple[str, ...]:
    for g in items:
        if g not in cfg.index:
            raise ValidationError(f"guided: unknown generator {g!r} in {what}")
    return tuple(items)


def _poisson_quotient_is_zero(S: PoissonStructure, killed: set[int]) -> bool:
    """Every bracket of surviving generators lies in the ideal of the killed ones."""
    for (i, j), p in S.table.items():
        if i in killed or j in killed:
            continue
        if any(not any(m[k] for k in killed) for m in p.terms):
            return False
    return True


def _glue(P: SpectrumPoset, entries: Sequence[Mapping], key: str) -> SpectrumPoset:
    nodes = list(P.nodes)
    for entry in entries:
        if key not in entry:
            continue
        support = tuple(sorted(P.names.index(s) for s in entry["support"]))
        height = int(entry.get("height", 0))
        gens = tuple(entry[key])
        hits = [k for k, node in enumerate(nodes) if node.support == support and node.height == height]
        if not hits:
            continue  # e.g. a non-primitive node in the primitive view
        killed = {P.names[i] for i in range(len(P.names)) if i not in support}
        if not killed <= set(gens):
            raise ValidationError(f"gluing generators {gens} omit killed variables {sorted(killed - set(gens))}")
        nodes[hits[0]] = replace(nodes[hits[0]], generators=gens)
    return SpectrumPoset(P.names, nodes, P.order, P.kind)


def guided_spectra(cfg: Config) -> GuidedResult:
    block = cfg.extra.get("guided")
    if not isinstance(block, Mapping):
        raise ValidationError("document has no 'guided' block")
    if cfg.pbw is None:
        raise ValidationError("guided mode needs a quantized presentation")
    p = cfg.pbw
    torus_names = _names(cfg, block.get("torus", ()), "torus")
    always = _names(cfg, block.get("always", ()), "always")
    kill = _names(cfg, block.get("kill", ()), "kill")
    if not set(always) <= set(torus_names) or not set(kill) <= set(torus_names):
        raise ValidationError("guided: 'always' and 'kill' must be torus generators")

    quotient = commutative_laurent_rank(quotient_by_generators(p, kill))
    if not quotient.saturated:
        raise MathError("quotient is not a Laurent polynomial ring (torsion in the unit lattice)")

    locs = []
    for spec in block.get("localizations", ()):
        killed = _names(cfg, spec.get("quotient", ()), "localization")
        base = quotient_by_generators(p, killed) if killed else p
        T = torus_from_pbw(base, _names(cfg, spec["generators"], "localization"))
        locs.append(Localization(spec.get("name", "T"), killed, T, qtorus_center(T)))

    T = torus_from_pbw(p, torus_names)
    tpos = [cfg.index[g] for g in torus_names]
    S = cfg.limit().restrict(tpos)
    if S.log_linear is None:
        raise MathError("the limit bracket on the torus generators is not log-linear")
    if not _poisson_quotient_is_zero(cfg.limit(), {cfg.index[g] for g in kill}):
        raise MathError("the Poisson bracket does not vanish on the quotient")
    fixed = [torus_names.index(g) for g in always]

    posets = []
    for kind, data in (("quantum", T), ("poisson", S.log_linear)):
        strata = enumerate_strata(kind, data, fixed)
        bottom = [s for s in strata if len(s.support) == len(fixed)]
        if bottom and bottom[0].center_rank != quotient.rank:
            raise MathError(f"{kind} torus on {always} has center rank {bottom[0].center_rank}, "
                            f"but the quotient has Laurent rank {quotient.rank}")
        posets.append(SpectrumPoset.from_strata(strata, torus_names, kind))

    gluing = block.get("gluing", ())
    Q, P = (_glue(X, gluing, "generators") for X in posets)
    Qp, Pp = (_glue(X.primitive(), gluing, "primitive_generators") for X in (Q, P))
    result = GuidedResult(quotient, kill, locs, Q, P, Qp, Pp)
    result.spec_match = poset_isomorphic(Q, P)
    result.prim_match = poset_isomorphic(Qp, Pp)
    return result
