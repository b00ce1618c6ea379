"""The ``semiclassical`` command.

Exit status: 0 when the computation finished (whatever its verdict), 1 when a
``selftest`` suite fails, 2 for unreadable or invalid input, 3 for a
mathematical error raised by a module (its class name is printed), 4 when an
internal degree or iteration bound is exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .config import Config, load_config
from .core.field import format_field
from .errors import BoundExceeded, MathError, ValidationError
from .guided import guided_spectra, torus_from_pbw
from .ideals import is_poisson_ideal, stable_core_bounded
from .pbw import check_confluence
from .poisson import jacobi_check, lie_jacobi_check, pair_order
from .polynomial import format_monomial
from .selftest import SUITES, run_selftest
from .spectra import (SpectrumPoset, canonical_json, core_ideal, enumerate_strata, poset_isomorphic,
                      ptorus_center, qtorus_center, symplectic_core)


class Report:
    def __init__(self, name: str, command: str):
        self.name = name
        self.command = command
        self.lines: list[str] = []
        self.doc: dict = {"command": command, "name": name}
        self.files: dict[str, str] = {}  # extra artifacts for --out
        self.status = 0


def _basis_text(basis, names) -> str:
    return ", ".join(format_monomial(v, names) for v in basis) if basis else "none"


def _ideal_doc(I, names) -> list[str]:
    return [g.format(names) for g in I.groebner()]


def cmd_limit(cfg: Config, args) -> Report:
    r = Report(cfg.name, "limit")
    S = cfg.limit()
    r.lines = S.format_table()
    r.doc["variables"] = list(S.names)
    r.doc["brackets"] = [{"left": S.names[i], "right": S.names[j], "value": S.entry(i, j).format(S.names)}
                         for i, j in pair_order(S.n)]
    r.doc["log_linear"] = None if S.log_linear is None else [[format_field(x) for x in row]
                                                              for row in S.log_linear]
    return r


def cmd_jacobi(cfg: Config, args) -> Report:
    r = Report(cfg.name, "jacobi")
    S = cfg.poisson_structure()
    names = S.names
    w = jacobi_check(S)
    if w is None and cfg.lie is not None:
        lw = lie_jacobi_check(cfg.lie)
        if lw is not None:
            r.lines = [f"Witness: ({names[lw.i]},{names[lw.j]},{names[lw.k]}) cyclic sum has "
                       f"{names[lw.l]}-coefficient {format_field(lw.residual)}"]
            r.doc["result"] = "witness"
            return r
    if w is None:
        r.lines = ["Ok"]
        r.doc["result"] = "ok"
    else:
        residual = w.residual.format(names)
        r.lines = [f"Witness: ({names[w.i]},{names[w.j]},{names[w.k]}) jacobiator = {residual}"]
        r.doc.update(result="witness", triple=[names[w.i], names[w.j], names[w.k]], residual=residual)
    return r


def cmd_center(cfg: Config, args) -> Report:
    r = Report(cfg.name, "center")
    if cfg.qtorus is not None:
        T = cfg.qtorus
    elif cfg.pbw is not None and getattr(cfg.pbw.ring, "group", None) is not None:
        T = torus_from_pbw(cfg.pbw, cfg.generators)
    else:
        raise ValidationError("center needs a quantum torus or quantum affine space")
    basis = qtorus_center(T)
    r.lines = [f"rank {len(basis)}; basis: {_basis_text(basis, T.names)}",
               f"simple: {'yes' if not basis else 'no'}"]
    r.doc.update(rank=len(basis), basis=[list(v) for v in basis], simple=not basis)
    return r


def cmd_pcenter(cfg: Config, args) -> Report:
    r = Report(cfg.name, "pcenter")
    pi = cfg.log_linear_matrix()
    basis = ptorus_center(pi)
    r.lines = [f"rank {len(basis)}; basis: {_basis_text(basis, cfg.generators)}"]
    r.doc.update(rank=len(basis), basis=[list(v) for v in basis])
    return r


def _side(cfg: Config, side: str | None) -> str:
    if side is None:
        return "quantum" if cfg.qtorus is not None else "poisson"
    if side == "quantum" and cfg.qtorus is None:
        raise ValidationError(f"a {cfg.kind} document has no quantum torus data")
    return side


def cmd_strata(cfg: Config, args) -> Report:
    side = _side(cfg, args.side)
    data = cfg.qtorus if side == "quantum" else cfg.log_linear_matrix()
    strata = enumerate_strata(side, data)
    P = SpectrumPoset.from_strata(strata, cfg.generators, side)
    if args.primitive:
        P = P.primitive()
    r = Report(cfg.name, "strata")
    names = cfg.generators
    for s in strata:
        W = "{" + ", ".join(names[i] for i in s.support) + "}"
        extra = f"; basis {_basis_text(s.center_basis, names)}" if s.center_rank else ""
        r.lines.append(f"stratum {W}: center rank {s.center_rank}{extra}")
    r.lines.append(f"nodes ({len(P.nodes)}):")
    for i, node in enumerate(P.nodes):
        mark = "primitive" if node.primitive else "not primitive"
        r.lines.append(f"  {i}: {P.node_text(i)}  [{node.cardinality_class}, height {node.height}, {mark}]")
    r.lines.append("edges:")
    r.lines += [f"  {P.node_text(a)} < {P.node_text(b)}" for a, b in P.edges]
    r.doc = P.to_json()
    stem = cfg.name + ("-poisson" if side == "poisson" and cfg.qtorus is not None else "")
    r.files[f"{stem}{'.prim' if args.primitive else ''}.poset.json"] = P.dumps()
    return r


def _parse_point(cfg: Config, text: str):
    parts = [t for t in text.split(",")]
    if len(parts) != len(cfg.generators):
        raise ValidationError(f"point needs {len(cfg.generators)} coordinates, got {len(parts)}")
    return [cfg.field_scalar(t.strip()) for t in parts]


def cmd_core(cfg: Config, args) -> Report:
    r = Report(cfg.name, "core")
    names = cfg.generators
    if args.point is not None:
        point = _parse_point(cfg, args.point)
        desc = symplectic_core(point, cfg.log_linear_matrix())
        values = [f"{format_monomial(b, names)} = {format_field(v)}" for b, v in zip(desc.basis, desc.values)]
        ideal = core_ideal(desc, len(names))
        r.lines = [f"support: {', '.join(names[i] for i in desc.support) or 'none'}",
                   f"center rank: {len(desc.basis)}",
                   f"values: {'; '.join(values) or 'none'}",
                   f"dimension: {desc.dimension}",
                   f"core ideal: {ideal.format(names)}"]
        r.doc.update(point=[format_field(x) for x in point], support=[names[i] for i in desc.support],
                     values=values, dimension=desc.dimension, ideal=_ideal_doc(ideal, names))
        return r
    S = cfg.poisson_structure()
    D = 3 if args.degree_bound is None else args.degree_bound
    results = []
    for name, J, declared in _selected_ideals(cfg, args):
        core, cert = stable_core_bounded(J, S, D, args.max_iter)
        r.lines.append(f"{name}: P({J.format(names)}) = {core.format(names)}")
        r.lines += ["  " + line for line in cert.lines()]
        item = {"name": name, "ideal": _ideal_doc(J, names), "core": _ideal_doc(core, names),
                "iterations": cert.iterations, "poisson_verified": cert.poisson_verified,
                "contained_verified": cert.contained_verified}
        if declared is not None:
            ok = core.same_ideal(declared)
            r.lines.append(f"  declared core: {'matches' if ok else 'DIFFERS'}")
            item["matches_declared"] = ok
        results.append(item)
    r.doc.update(degree_bound=D, results=results)
    return r


def _selected_ideals(cfg: Config, args):
    ideals = cfg.ideals()
    if not ideals:
        raise ValidationError("document has no 'ideals' block")
    if args.ideal is not None:
        ideals = [t for t in ideals if t[0] == args.ideal]
        if not ideals:
            raise ValidationError(f"no ideal named {args.ideal!r}")
    return ideals


def cmd_gb(cfg: Config, args) -> Report:
    r = Report(cfg.name, "gb")
    names = cfg.generators
    out = []
    for name, J, _ in _selected_ideals(cfg, args):
        r.lines.append(f"{name} ({J.order.kind}): {J.format(names)}")
        out.append({"name": name, "order": J.order.kind, "basis": _ideal_doc(J, names)})
    r.doc["results"] = out
    return r


def cmd_poisson_ideal(cfg: Config, args) -> Report:
    r = Report(cfg.name, "poisson-ideal")
    S = cfg.poisson_structure()
    out = []
    for name, J, _ in _selected_ideals(cfg, args):
        ok = is_poisson_ideal(J, S)
        r.lines.append(f"{name}: {'Poisson ideal' if ok else 'not a Poisson ideal'}")
        out.append({"name": name, "poisson": ok})
    r.doc["results"] = out
    return r


def cmd_confluence(cfg: Config, args) -> Report:
    if cfg.pbw is None:
        raise ValidationError(f"a {cfg.kind} document has no PBW presentation")
    r = Report(cfg.name, "confluence")
    D = 4 if args.degree_bound is None else args.degree_bound
    cx = check_confluence(cfg.pbw, D)
    if cx is None:
        r.lines = [f"Ok (overlaps up to degree {D})"]
        r.doc.update(result="ok", degree_bound=D)
    else:
        r.lines = [f"Counterexample: {cx}"]
        r.doc.update(result="counterexample", overlap=cx.monomial, left=str(cx.nf1), right=str(cx.nf2))
    return r


def cmd_guided(cfg: Config, args) -> Report:
    r = Report(cfg.name, "guided")
    res = guided_spectra(cfg)
    r.lines = res.lines()
    r.doc.update(quotient_rank=res.quotient.rank,
                 localizations=[{"name": loc.name, "simple": loc.simple,
                                 "center": [list(v) for v in loc.center]} for loc in res.localizations],
                 spec=res.quantum.to_json(), poisson_spec=res.poisson.to_json(),
                 spec_isomorphic=res.spec_match.isomorphic, prim_isomorphic=res.prim_match.isomorphic)
    for tag, P in (("", res.quantum), ("-poisson", res.poisson)):
        r.files[f"{cfg.name}{tag}.poset.json"] = P.dumps()
    return r


def cmd_normalize(cfg: Config, args) -> Report:
    r = Report(cfg.name, "normalize")
    r.doc = cfg.to_document()
    r.lines = cfg.dumps().rstrip("\n").split("\n")
    return r


def _load_poset(path: str) -> SpectrumPoset:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg})") from None
    return SpectrumPoset.from_json(doc)


def cmd_match(args) -> Report:
    P, Q = _load_poset(args.first), _load_poset(args.second)
    r = Report(Path(args.first).stem, "match")
    cmp = poset_isomorphic(P, Q)
    r.lines = cmp.lines(P, Q)
    r.doc.update(isomorphic=cmp.isomorphic, witness=cmp.witness or None,
                 bijection=[[P.node_text(a), Q.node_text(b)] for a, b in sorted(cmp.bijection.items())])
    return r


def cmd_selftest(args) -> Report:
    r = Report("selftest", "selftest")
    results = run_selftest(args.seed, args.only)
    r.lines = [res.line() for res in results]
    r.doc.update(seed=args.seed, suites=[{"name": res.name, "passed": res.passed, "detail": res.detail}
                                         for res in results])
    r.status = 0 if all(res.passed for res in results) else 1
    return r


CONFIG_COMMANDS = {
    "limit": (cmd_limit, "semiclassical limit bracket table"),
    "jacobi": (cmd_jacobi, "Jacobi identity check"),
    "center": (cmd_center, "center of a quantum torus"),
    "pcenter": (cmd_pcenter, "Poisson center of a log-linear torus"),
    "strata": (cmd_strata, "support strata and spectrum poset"),
    "core": (cmd_core, "symplectic core of a point or Poisson cores of ideals"),
    "gb": (cmd_gb, "reduced Groebner bases of the document's ideals"),
    "poisson-ideal": (cmd_poisson_ideal, "test the document's ideals for Poisson closure"),
    "confluence": (cmd_confluence, "overlap check of a PBW presentation"),
    "guided": (cmd_guided, "guided spectrum classification (SL2, GL2)"),
    "normalize": (cmd_normalize, "print the canonical form of a document"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", metavar="DIR", help="write JSON reports and posets into DIR")
    parser = argparse.ArgumentParser(prog="semiclassical", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in CONFIG_COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("config")
        if name in ("core", "confluence"):
            p.add_argument("--degree-bound", type=int)
        if name == "core":
            p.add_argument("--max-iter", type=int, default=20)
            p.add_argument("--point", help="comma-separated coordinates, e.g. '2,3,0'")
        if name in ("core", "gb", "poisson-ideal"):
            p.add_argument("--ideal", help="only the ideal with this name")
        if name == "strata":
            p.add_argument("--side", choices=("quantum", "poisson"))
            p.add_argument("--primitive", action="store_true", help="keep primitive nodes only")
    p = sub.add_parser("match", parents=[common], help="compare two poset documents")
    p.add_argument("first")
    p.add_argument("second")
    p = sub.add_parser("selftest", parents=[common], help="randomized property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", choices=[name for name, _ in SUITES])
    return parser


def run(args: argparse.Namespace) -> Report:
    if args.command == "match":
        return cmd_match(args)
    if args.command == "selftest":
        return cmd_selftest(args)
    cfg = load_config(args.config)
    return CONFIG_COMMANDS[args.command][0](cfg, args)


def _emit(report: Report, args_format: str, out: str | None):
    if args_format == "json":
        sys.stdout.write(canonical_json(report.doc))
    else:
        sys.stdout.write("\n".join(report.lines) + "\n")
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{report.name}.{report.command}.json").write_text(canonical_json(report.doc))
        for fname, text in report.files.items():
            (d / fname).write_text(text)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = run(args)
        _emit(report, args.format, args.out)
        return report.status
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MathError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except BoundExceeded as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
