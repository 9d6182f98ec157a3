"""Command-line entry point ``odlab``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from . import catalog as C
from . import generation as G
from . import knot as K
from . import maps as M
from . import oracle as O
from . import reduction as R
from . import verify as V


class UsageError(Exception):
    pass


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False))


def _table(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    cells = [list(map(str, header))] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _load_map(args) -> M.OrientedMap:
    if getattr(args, "named", None):
        cat = G.base_catalog()
        if args.named not in cat:
            raise UsageError(f"unknown map name {args.named!r}; choose from {', '.join(sorted(cat))}")
        return cat[args.named]
    if not getattr(args, "infile", None):
        raise UsageError("give a map with --in FILE or --named NAME")
    try:
        text = sys.stdin.read() if args.infile == "-" else Path(args.infile).read_text()
        data = json.loads(text)
        if "representative" in data:
            data = data["representative"]
        m = M.OrientedMap.from_json(data)
    except OSError as ex:
        raise UsageError(f"cannot read {args.infile}: {ex}") from ex
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as ex:
        raise UsageError(f"{args.infile}: not an odmap-v1 map: {ex}") from ex
    return m


def _checked_map(args) -> M.OrientedMap:
    m = _load_map(args)
    try:
        M.validate(m)
    except M.MapError as ex:
        raise UsageError(f"invalid map: {ex}") from ex
    if not M.is_connected(m):
        raise UsageError("the map is disconnected")
    return m


# ---------------------------------------------------------------- subcommands

def cmd_validate(args) -> int:
    m = _load_map(args)
    rep = M.validate(m, strict=False)
    if args.json:
        _emit_json({"valid": rep.valid, "connected": rep.connected, "components": rep.components,
                    "errors": rep.errors})
    else:
        print("valid" if rep.valid else "invalid")
        if rep.valid:
            print(f"components: {rep.components}")
        for e in rep.errors:
            print(f"  {e}")
    return 0 if rep.valid else 1


def cmd_invariants(args) -> int:
    m = _checked_map(args)
    inv = M.invariants(m)
    d = inv.as_dict()
    if args.json:
        _emit_json(d)
    else:
        print(_table([(k, d[k]) for k in ("v", "e", "f_L", "f_R", "f", "phi", "g", "ell", "omega",
                                           "g_L", "g_R", "loop_config")], ("invariant", "value")))
    return 0


def cmd_faces(args) -> int:
    m = _checked_map(args)
    fr = M.trace_faces(m)
    data = {"L": [list(f) for f in fr.l_faces], "R": [list(f) for f in fr.r_faces],
            "straight": [list(f) for f in fr.straight_faces]}
    if args.json:
        _emit_json(data)
    else:
        for kind, faces in data.items():
            print(f"{kind} faces ({len(faces)}):")
            for f in faces:
                print("  " + " ".join(map(str, f)))
    return 0


def cmd_reduce(args) -> int:
    m = _checked_map(args)
    sc = R.scheme_of(m)
    if args.dot:
        print(M.to_dot(sc.representative, "scheme"))
        return 0
    if args.json:
        _emit_json(sc.to_json())
        return 0
    rep = sc.representative
    print(f"scheme code: {sc.code}")
    print(f"representative: v={rep.v}, 2PI={R.is_2pi(rep)}")
    if sc.ladders:
        rows = [(i, l.kind, len(l.rungs), "yes" if l.closed else "no", " ".join(map(str, sorted(l.vertices))))
                for i, l in enumerate(sc.ladders)]
        print(_table(rows, ("ladder", "kind", "rungs", "ring", "vertices")))
    else:
        print("no ladders")
    return 0


def _parts_json(parts: list[M.OrientedMap]) -> list[dict]:
    return [{"map": p.to_json(), "invariants": M.invariants(p).as_dict()} for p in parts]


def cmd_contract(args) -> int:
    m = _checked_map(args)
    try:
        if args.dipole is not None:
            dips = R.find_dipoles(m)
            if not 0 <= args.dipole < len(dips):
                raise UsageError(f"dipole index out of range; the map has {len(dips)} dipoles")
            parts, rep = R.contract_dipole(m, dips[args.dipole])
        else:
            lads = R.maximal_ladders(m)
            if not 0 <= args.ladder < len(lads):
                raise UsageError(f"ladder index out of range; the map has {len(lads)} maximal ladders")
            parts, rep = R.contract_ladder(m, lads[args.ladder], args.rung)
    except R.CaseTableViolation as ex:
        print(f"case table violation: {ex}", file=sys.stderr)
        return 1
    if args.json:
        _emit_json({"report": rep.as_dict(), "parts": _parts_json(parts)})
    else:
        d = rep.as_dict()
        print(_table([(k, d[k]) for k in sorted(d)], ("field", "value")))
        for i, p in enumerate(parts):
            inv = M.invariants(p)
            print(f"part {i}: v={inv.v} g={inv.g} ℓ={inv.ell}")
    return 0


def cmd_cuts(args) -> int:
    m = _checked_map(args)
    cuts = R.two_edge_cuts(m)
    if args.json:
        _emit_json({"two_pi": not cuts, "cuts": [[list(a), list(b)] for a, b in cuts]})
    else:
        print(f"2PI: {not cuts}")
        for i, (a, b) in enumerate(cuts):
            print(f"  cut {i}: edge {a[0]}->{a[1]} and edge {b[0]}->{b[1]}")
    return 0


def cmd_flip(args) -> int:
    m = _checked_map(args)
    cuts = R.two_edge_cuts(m)
    if not 0 <= args.cut < len(cuts):
        raise UsageError(f"cut index out of range; the map has {len(cuts)} two-edge cuts")
    parts = list(R.flip(m, cuts[args.cut]))
    if args.json:
        _emit_json({"parts": _parts_json(parts)})
    else:
        for i, p in enumerate(parts):
            inv = M.invariants(p)
            print(f"part {i}: v={inv.v} g={inv.g} ℓ={inv.ell} code={M.canonical_code(p)}")
    return 0


def cmd_enumerate(args) -> int:
    en = G.Enumerator(args.rung_cap)
    try:
        if args.part == "all":
            pi, pr = en.get(args.g, args.l, "2PI"), en.get(args.g, args.l, "2PR")
            s = en.get(args.g, args.l, "all")
        else:
            s = en.get(args.g, args.l, args.part)
            pi = s if args.part == "2PI" else None
            pr = s if args.part == "2PR" else None
    except G.UnsupportedGrade as ex:
        raise UsageError(str(ex)) from ex
    if args.out:
        C.write_catalog(s, args.out, args.rung_cap)
    if args.json:
        _emit_json(C.catalog_to_json(s, args.rung_cap))
        return 0

    def size(part: G.SchemeSet) -> int:
        if not args.mod_orientation:
            return len(part)
        return len({R.scheme_code(e.scheme.representative, mod_orientation=True) for e in part.sorted()})

    counts = []
    if pi is not None:
        counts.append(f"2PI: {size(pi)}")
    if pr is not None:
        counts.append(f"2PR: {size(pr)}")
    print(", ".join(counts))
    if args.list:
        for e in s.sorted():
            print(f"  {'2PI' if e.two_pi else '2PR'}  v={e.inv.v}  {e.code}")
    return 0


def cmd_oracle(args) -> int:
    cache = Path(args.cache) if args.cache else O.cache_dir_default()
    try:
        corpus = O.build_corpus(args.max_v, cache, args.jobs)
    except O.BoundExceeded as ex:
        raise UsageError(str(ex)) from ex
    if args.out:
        O.write_corpus_jsonl(corpus.entries, Path(args.out))
    rows = []
    for v in range(1, args.max_v + 1):
        es = corpus.by_v(v)
        rows.append((v, len(es), sum(e.melon_free for e in es), sum(e.two_pi for e in es),
                     sum(e.melon_free and e.two_pi for e in es)))
    if args.json:
        _emit_json([{"v": r[0], "maps": r[1], "melon_free": r[2], "two_pi": r[3], "melon_free_two_pi": r[4]}
                    for r in rows])
    else:
        print(_table(rows, ("v", "maps", "melon-free", "2PI", "melon-free 2PI")))
    return 0


def cmd_knot(args) -> int:
    m = _checked_map(args)
    try:
        d = K.to_knot_diagram(m)
    except K.KnotError as ex:
        print(f"not a knot diagram: {ex}", file=sys.stderr)
        return 1
    show_all = not (args.gauss or args.pd or args.bracket or args.classify)
    out: dict = {"crossings": d.crossing_count}
    if args.gauss or show_all:
        out["gauss"] = d.gauss_string()
    if args.pd or show_all:
        out["pd"] = [list(x) for x in d.pd]
    try:
        if args.bracket or show_all:
            out["bracket"] = K.pformat(K.kauffman_bracket(d.pd))
            out["normalized_bracket"] = K.pformat(K.diagram_polynomial(d))
        if args.classify or show_all:
            reduced, composite = K.is_reduced_diagram(m)
            out["class"] = K.knot_class_of(d)
            out["reduced"] = reduced
            out["composite"] = composite
    except K.TooManyCrossings as ex:
        print(str(ex), file=sys.stderr)
        return 1
    if args.json:
        _emit_json(out)
    else:
        for k, val in out.items():
            print(f"{k}: {val}")
    return 0


def cmd_catalog(args) -> int:
    try:
        if args.action == "verify":
            cf = C.read_catalog_file(args.paths[0])
            s = cf.schemes
            print(f"ok: {len(s)} entries, (g={s.g}, ℓ={s.ell}, {s.selection}), rung cap {cf.rung_cap}")
            return 0
        if len(args.paths) != 2:
            raise UsageError("catalog diff needs two paths")
        a, b = (C.read_catalog(p) for p in args.paths)
        d = C.diff_catalogs(a, b)
    except C.CatalogError as ex:
        print(f"{type(ex).__name__}: {ex}", file=sys.stderr)
        return 1
    except OSError as ex:
        raise UsageError(str(ex)) from ex
    if args.json:
        _emit_json(d.as_dict())
    else:
        print(f"only in A: {len(d.only_a)}, only in B: {len(d.only_b)}, common: {len(d.common)}")
        for c in d.only_a:
            print(f"  A {c}")
        for c in d.only_b:
            print(f"  B {c}")
    return 0


def cmd_verify_paper(args) -> int:
    cache = Path(args.cache) if args.cache else O.cache_dir_default()
    t = time.perf_counter()

    def progress(row: V.ClaimRow) -> None:
        if not args.json:
            print(row.line(), flush=True)

    rows = V.run_suite(full=args.full, cache_dir=cache, jobs=args.jobs, progress=progress)
    failed = [r for r in rows if not r.passed]
    if args.json:
        _emit_json({"rows": [r.as_dict() for r in rows], "failed": len(failed)})
    else:
        print(f"{len(rows) - len(failed)}/{len(rows)} rows pass in {time.perf_counter() - t:.1f}s")
    return 1 if failed else 0


# ---------------------------------------------------------------- parser

def _add_map_input(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--in", dest="infile", metavar="FILE", help="odmap-v1 JSON file, or - for stdin")
    g.add_argument("--named", metavar="NAME", help="a bundled map: " + ", ".join(sorted(G.base_catalog())))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="odlab", description="Oriented 4-regular maps and their schemes.")
    p.add_argument("--version", action="version", version=f"odlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str, map_input: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        if map_input:
            _add_map_input(sp)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check a map's involution and orientation")
    add("invariants", cmd_invariants, "genus, grade, degree and strand counts")
    add("faces", cmd_faces, "list L, R and straight faces")
    sp = add("reduce", cmd_reduce, "scheme code and ladder table")
    sp.add_argument("--dot", action="store_true", help="emit the scheme representative as DOT")
    sp = add("contract", cmd_contract, "contract a dipole or one rung of a maximal ladder")
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--dipole", type=int, metavar="I")
    which.add_argument("--ladder", type=int, metavar="I")
    sp.add_argument("--rung", type=int, default=0, help="rung of the ladder to contract")
    add("cuts", cmd_cuts, "two-edge cuts")
    sp = add("flip", cmd_flip, "flip along a two-edge cut")
    sp.add_argument("--cut", type=int, required=True, metavar="I")
    sp = add("enumerate", cmd_enumerate, "enumerate schemes at fixed (g, ℓ)", map_input=False)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    part = sp.add_mutually_exclusive_group()
    part.add_argument("--part", choices=("all", "2PI", "2PR"), default="all")
    part.add_argument("--two-pi", dest="part", action="store_const", const="2PI")
    part.add_argument("--two-pr", dest="part", action="store_const", const="2PR")
    sp.add_argument("--mod-orientation", action="store_true",
                    help="count classes up to reversing every arrow")
    sp.add_argument("--rung-cap", type=int, default=3)
    sp.add_argument("--out", metavar="PATH", help="write an odcatalog-v1 file")
    sp.add_argument("--list", action="store_true", help="list the scheme codes")
    sp.add_argument("--jobs", type=int, default=1, help="accepted for symmetry; enumeration runs serially")
    sp = add("oracle", cmd_oracle, "build the exhaustive map corpus", map_input=False)
    sp.add_argument("--max-v", type=int, required=True)
    sp.add_argument("--cache", metavar="DIR", help="corpus cache directory (default: $ODLAB_CACHE)")
    sp.add_argument("--out", metavar="PATH", help="write the corpus as odcorpus-v1 JSON lines")
    sp.add_argument("--jobs", type=int, default=1)
    sp = add("knot", cmd_knot, "alternating knot diagram of a planar one-face map")
    sp.add_argument("--gauss", action="store_true")
    sp.add_argument("--pd", action="store_true")
    sp.add_argument("--bracket", action="store_true")
    sp.add_argument("--classify", action="store_true")
    sp = add("catalog", cmd_catalog, "verify or diff odcatalog-v1 files", map_input=False)
    sp.add_argument("action", choices=("verify", "diff"))
    sp.add_argument("paths", nargs="+")
    sp = add("verify-paper", cmd_verify_paper, "run the acceptance suite", map_input=False)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--fast", action="store_true", help="sweeps over v≤5 (default)")
    mode.add_argument("--full", action="store_true", help="sweeps over v≤6")
    sp.add_argument("--cache", metavar="DIR")
    sp.add_argument("--jobs", type=int, default=1)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as ex:
        print(f"odlab {args.command}: error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
