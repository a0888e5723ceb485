"""Command line front end.

    pyramid gen 3 4 --format dot
    pyramid resolve 3 4 --stable --vertex 1,1,1 --compare
    pyramid verify --theorem periodicity 1 4

The coefficient field defaults to the rationals; set PYRAMID_FIELD=gf:<p>
(or pass --field) to work over GF(p).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .algebra import (ANTICOMMUTATIVE, COMMUTATIVE, BoundAlgebra, build_algebra, cover_algebra, opposite,
                      quadratic_dual, stable_extension)
from .constructions import cone
from .linalg import Field, field_from_name
from .quiver import QuiverError, check_params, cover_window, generate_quiver, stable_quiver, vertex_label
from .resolution import (compare, format_table, minimal_resolution, predict_resolution, reports_json)
from .verification import THEOREMS, run_check, run_corpus

SCHEMES = {"anticommutative": ANTICOMMUTATIVE, "commutative": COMMUTATIVE}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    n: Optional[int] = None
    m: Optional[int] = None
    scheme: str = "anticommutative"
    field: Field = field(default_factory=lambda: field_from_name(None))
    fmt: str = "table"
    cutoff: Optional[int] = None
    stable: bool = False
    cover: Optional[tuple] = None

    def validate(self):
        if self.n is not None:
            try:
                check_params(self.n, self.m)
            except QuiverError as e:
                raise UsageError(str(e))
        if self.cover is not None:
            lo, hi = self.cover
            if lo > hi:
                raise UsageError(f"empty cover window {lo}..{hi}")
        if self.cutoff is not None and self.cutoff < 1:
            raise UsageError("cutoff must be >= 1")


def parse_window(text: str) -> tuple:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO..HI, got {text!r}")


def parse_vertex(text: str) -> tuple:
    """``1,2,3`` or ``1,2@4`` (cover level after @)."""
    level = None
    if "@" in text:
        text, lev = text.split("@", 1)
        level = int(lev)
    v = tuple(int(x) for x in text.split(",") if x.strip())
    return v + ((level,) if level is not None else ())


def make_algebra(cfg: RunConfig) -> BoundAlgebra:
    A = build_algebra(generate_quiver(cfg.n, cfg.m), SCHEMES[cfg.scheme], cfg.field)
    if cfg.stable or cfg.cover:
        A = stable_extension(A)
    if cfg.cover:
        A = cover_algebra(A, *cfg.cover)
    return A


def _skeleton_table(sk) -> str:
    lines = [f"# n={sk.n} m={sk.m} {sk.family} vertices={len(sk.vertices)} arrows={len(sk.arrows)}"]
    lines += [f"vertex {vertex_label(v)}" for v in sk.vertices]
    lines += [f"arrow {vertex_label(a.source)} {a.kind} {vertex_label(a.target)}" for a in sk.arrows]
    return "\n".join(lines) + "\n"


def _dims_table(alg: BoundAlgebra) -> str:
    lines = ["source\ttarget\tdegree\tdim"]
    lines += [f"{vertex_label(i)}\t{vertex_label(j)}\t{l}\t{d}" for i, j, l, d in alg.dims_table()]
    return "\n".join(lines) + "\n"


def cmd_gen(cfg: RunConfig, args) -> int:
    sk = generate_quiver(cfg.n, cfg.m)
    if cfg.stable or cfg.cover:
        sk = stable_quiver(sk)
    if cfg.cover:
        sk = cover_window(sk, *cfg.cover)
    if cfg.fmt == "json":
        out = json.dumps(sk.to_json(), indent=2, sort_keys=True) + "\n"
    elif cfg.fmt == "dot":
        out = sk.to_dot()
    else:
        out = _skeleton_table(sk)
    sys.stdout.write(out)
    return 0


def _emit_algebra(alg: BoundAlgebra, cfg: RunConfig):
    if cfg.fmt == "json":
        doc = {"name": alg.name, "field": alg.field.name, "relations": alg.relations_text().splitlines(),
               "dims": alg.dims_json(), "dims_sha256": alg.dims_checksum()}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"# {alg.name} over {alg.field.name}\n# relations\n")
        sys.stdout.write(alg.relations_text())
        sys.stdout.write("# graded dimensions\n")
        sys.stdout.write(_dims_table(alg))


def cmd_build(cfg: RunConfig, args) -> int:
    _emit_algebra(make_algebra(cfg), cfg)
    return 0


def cmd_dualize(cfg: RunConfig, args) -> int:
    D = quadratic_dual(make_algebra(cfg))
    if args.opposite:
        D = opposite(D)
    _emit_algebra(D, cfg)
    return 0


def cmd_resolve(cfg: RunConfig, args) -> int:
    alg = make_algebra(cfg)
    if args.vertex is not None:
        v = parse_vertex(args.vertex)
        if v not in alg.skeleton:
            print(f"error: {args.vertex} is not a vertex of {alg.name}", file=sys.stderr)
            return 1
        verts = [v]
    else:
        verts = list(alg.vertices)

    def predict(v):
        if cfg.cover:
            return predict_resolution(v, cfg.m, "bar", member=lambda w: w in alg.skeleton)
        if cfg.stable:
            return predict_resolution(v, cfg.m)
        return predict_resolution(v, cfg.m, "bar")

    if args.predict_only:
        reports = {v: predict(v) for v in verts}
    else:
        reports = {v: minimal_resolution(alg, v, cfg.cutoff) for v in verts}
    if args.compare:
        status = 0
        for v in verts:
            d = compare(reports[v] if not args.predict_only else minimal_resolution(alg, v, cfg.cutoff),
                        predict(v))
            print(f"S({vertex_label(v)}): {d.describe()}")
            status |= bool(d)
        return status
    if cfg.fmt == "json":
        sys.stdout.write(reports_json(reports) + "\n")
    else:
        for v in verts:
            sys.stdout.write(format_table(reports[v]))
    return 0


def cmd_cone(cfg: RunConfig, args) -> int:
    A = build_algebra(generate_quiver(cfg.n, cfg.m), SCHEMES[cfg.scheme], cfg.field)
    res = cone(A)
    sys.stdout.write(json.dumps(res.manifest, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_verify(cfg: RunConfig, args) -> int:
    if args.theorem:
        name, n, m = args.theorem
        if name not in THEOREMS:
            raise UsageError(f"unknown theorem {name!r}; choose from {', '.join(THEOREMS)}")
        try:
            check_params(int(n), int(m))
        except (QuiverError, ValueError) as e:
            raise UsageError(str(e))
        from .verification import CorpusReport
        rep = CorpusReport([run_check(name, int(n), int(m), SCHEMES[cfg.scheme], cfg.field)])
    elif args.corpus:
        nmax, mmax = args.corpus
        rep = run_corpus(nmax, mmax, scheme=SCHEMES[cfg.scheme], field=cfg.field, workers=args.workers)
    else:
        raise UsageError("verify needs --corpus NMAX MMAX or --theorem NAME N M")
    for r in rep.results:
        print(f"{r.status.upper():<12} {r.theorem:<20} n={r.n} m={r.m}  {r.detail}")
    c = rep.counts()
    print(f"{c['pass']} passed, {c['fail']} failed, {c['inconclusive']} inconclusive")
    if args.junit:
        with open(args.junit, "w", encoding="utf-8") as fh:
            fh.write(rep.to_junit())
    return rep.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pyramid", description="n-cubic pyramid algebras and their resolutions")
    p.add_argument("--field", default=None, help="rational (default) or gf:<p>; overrides PYRAMID_FIELD")
    p.add_argument("--scheme", choices=sorted(SCHEMES), default="anticommutative")
    sub = p.add_subparsers(dest="command", required=True)

    def nm(sp):
        sp.add_argument("n", type=int)
        sp.add_argument("m", type=int)

    def family(sp):
        sp.add_argument("--stable", action="store_true", help="add the type n+1 arrows")
        sp.add_argument("--cover", type=parse_window, metavar="LO..HI", help="levels of the Z-cover")

    def fmt(sp, choices=("json", "table")):
        sp.add_argument("--format", choices=choices, default="table" if "table" in choices else choices[0])

    sp = sub.add_parser("gen", help="print a quiver")
    nm(sp)
    family(sp)
    fmt(sp, ("json", "dot", "table"))
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("build", help="relations and graded dimensions")
    nm(sp)
    family(sp)
    fmt(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("dualize", help="quadratic dual on the same quiver")
    nm(sp)
    family(sp)
    fmt(sp)
    sp.add_argument("--opposite", action="store_true", help="reverse the arrows of the dual")
    sp.set_defaults(func=cmd_dualize)

    sp = sub.add_parser("resolve", help="minimal resolutions of simples")
    nm(sp)
    family(sp)
    fmt(sp)
    sp.add_argument("--vertex", help="comma separated, cover level after @")
    sp.add_argument("--predict-only", action="store_true", help="cuboid prediction only")
    sp.add_argument("--compare", action="store_true", help="diff computation against prediction")
    sp.add_argument("--cutoff", type=int, default=None, help="number of steps")
    sp.set_defaults(func=cmd_resolve)

    sp = sub.add_parser("cone", help="one cone step, prints the pipeline manifest")
    nm(sp)
    sp.set_defaults(func=cmd_cone)

    sp = sub.add_parser("verify", help="theorem checks")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--corpus", nargs=2, type=int, metavar=("NMAX", "MMAX"))
    g.add_argument("--theorem", nargs=3, metavar=("NAME", "N", "M"))
    sp.add_argument("--junit", help="write JUnit XML here")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        fld = field_from_name(args.field)
    except ValueError as e:
        parser.error(str(e))
    cfg = RunConfig(n=getattr(args, "n", None), m=getattr(args, "m", None), scheme=args.scheme, field=fld,
                    fmt=getattr(args, "format", "table"), cutoff=getattr(args, "cutoff", None),
                    stable=getattr(args, "stable", False), cover=getattr(args, "cover", None))
    try:
        cfg.validate()
        return args.func(cfg, args)
    except UsageError as e:
        parser.error(str(e))


if __name__ == "__main__":
    sys.exit(main())
