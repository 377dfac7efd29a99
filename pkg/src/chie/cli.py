"""Command-line interface.

Exit codes: 0 success / SAT / witness found, 1 UNSAT / threshold not met,
2 usage error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import lattice, render
from .pieces import PieceFileError, load_pieces
from .search import SearchBudget, encode_pieceset, search_piece_sets, verify_ten_piece_subclaims
from .solver import CoverageReport, check_solution, count_solutions, coverage, enumerate_solutions, solve
from .targets import EnumerationGuardError, enumerate_targets, f, get_target

OK, UNSAT, USAGE, INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, text: str, record: dict) -> None:
    if args.format == "json":
        print(json.dumps(record, indent=2, sort_keys=True))
    else:
        print(text)


def _write(path: str, content: str) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(content, encoding="utf-8")


def load_region(spec: str):
    """A catalog id like ``n16-t13``, or a file of vertices / ``T`` triangles."""
    try:
        t = get_target(spec)
        return t.id, t.region
    except KeyError:
        pass
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"unknown target {spec!r} (neither a catalog id nor a file)")
    tris, verts = [], []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].replace(",", " ").split()
        if not line:
            continue
        try:
            if line[0] == "T":
                tris.append((int(line[1]), int(line[2]), line[3]))
            else:
                verts.append((int(line[0]), int(line[1])))
        except (ValueError, IndexError):
            raise UsageError(f"{spec}:{lineno}: expected 'x y' or 'T x y half'") from None
    try:
        if tris and not verts:
            return path.stem, lattice.from_triangles(tris)
        if verts and not tris:
            return path.stem, lattice.rasterize_polygon(verts)
    except lattice.LatticeError as exc:
        raise UsageError(f"{spec}: {exc}") from None
    raise UsageError(f"{spec}: give either polygon vertices or triangles")


def _pieces(spec: str):
    try:
        return load_pieces(spec)
    except (OSError, PieceFileError, KeyError) as exc:
        raise UsageError(str(exc)) from None


def cmd_targets(args) -> int:
    targets = enumerate_targets(args.n)
    lines = [f"f({args.n}) = {len(targets)}"]
    for t in targets:
        spec = " ".join(map(str, t.spec))
        verts = " ".join(f"({x},{y})" for x, y in t.vertices)
        lines.append(f"{t.id}  spec=[{spec}]  vertices={verts}")
    _emit(args, "\n".join(lines), {"n": args.n, "f": len(targets),
                                   "targets": [t.record() for t in targets]})
    if args.svg:
        _write(args.svg, render.catalog_svg(targets))
    return OK


def cmd_solve(args) -> int:
    ps = _pieces(args.pieces)
    name, region = load_region(args.target)
    if len(region) != 2 * ps.total_triangles:
        raise UsageError(f"area mismatch: {ps.name} has {ps.total_triangles} triangles, "
                         f"target {name} has {len(region) // 2}")
    modulo = "region_symmetry" if args.modulo_symmetry else "none"
    if args.count:
        n = count_solutions(ps, region, modulo)
        _emit(args, f"{ps.name} on {name}: {n} solutions (modulo {modulo})",
              {"pieceset": ps.name, "target": name, "modulo": modulo, "count": n})
        return OK if n else UNSAT
    if args.all:
        sols = list(enumerate_solutions(ps, region))
        text = [f"{ps.name} on {name}: {len(sols)} solutions"]
        for i, sol in enumerate(sols):
            text.append(f"solution {i}")
            text.append(sol.serialize())
            if args.svg:
                _write(str(Path(args.svg) / f"{name}-{i:04d}.svg"),
                       render.solution_svg(sol, f"{ps.name} {name} #{i}"))
        _emit(args, "\n".join(text), {"pieceset": ps.name, "target": name, "count": len(sols),
                                      "solutions": [s.serialize().splitlines() for s in sols]})
        return OK if sols else UNSAT
    r = solve(ps, region, node_limit=args.node_limit)
    verdict = {True: "SAT", False: "UNSAT", None: "UNKNOWN"}[r.sat]
    record = {"pieceset": ps.name, "target": name, "verdict": verdict, "nodes": r.nodes}
    text = [f"{ps.name} on {name}: {verdict} (nodes={r.nodes})"]
    if r.witness is not None:
        if not check_solution(ps, region, r.witness):
            raise AssertionError("witness failed the independent soundness check")
        text.append(r.witness.serialize())
        record["witness"] = r.witness.serialize().splitlines()
        if args.svg:
            _write(args.svg, render.solution_svg(r.witness, f"{ps.name} {name}"))
    _emit(args, "\n".join(text), record)
    return OK if r.sat else UNSAT


def cmd_coverage(args) -> int:
    ps = _pieces(args.pieces)
    if ps.total_triangles != args.n:
        raise UsageError(f"{ps.name} has {ps.total_triangles} triangles, not {args.n}")
    rep: CoverageReport = coverage(ps, args.n)
    for v in rep.verdicts:
        if v.witness is not None and not check_solution(ps, v.target.region, v.witness):
            raise AssertionError(f"witness for {v.target.id} failed the soundness check")
        if args.svg and v.witness is not None:
            _write(str(Path(args.svg) / f"{v.target.id}.svg"),
                   render.solution_svg(v.witness, f"{ps.name} {v.target.id}"))
    _emit(args, rep.text(timings=args.timings), rep.record(timings=args.timings))
    return OK


def ftable(max_n: int) -> dict[int, int]:
    return {n: f(n) for n in range(1, max_n + 1)}


def doubling_violations(values: dict[int, int]) -> list[int]:
    return [x for x in values if 2 * x in values and not values[x] < values[2 * x]]


def cmd_ftable(args) -> int:
    values = ftable(args.max)
    bad = doubling_violations(values)
    lines = ["n f(n)"] + [f"{n} {v}" for n, v in values.items()]
    checked = [x for x in values if 2 * x in values]
    lines.append(f"doubling f(x) < f(2x) checked for x = {checked[0] if checked else '-'}"
                 f"..{checked[-1] if checked else '-'}: {'ok' if not bad else 'VIOLATED ' + str(bad)}")
    _emit(args, "\n".join(lines), {"f": {str(n): v for n, v in values.items()},
                                   "doubling_checked": checked, "doubling_violations": bad})
    if args.plot:
        _write(args.plot, render.ftable_svg(values))
    if bad:
        print(f"fatal: doubling property violated at x = {bad}", file=sys.stderr)
        return INTERNAL
    return OK


def cmd_search(args) -> int:
    budget = SearchBudget(
        max_candidates=args.max_candidates,
        max_solver_nodes=args.max_nodes,
        wall_clock=args.time_limit,
        max_results=args.max_results,
        checkpoint=args.checkpoint,
    )
    result = search_piece_sets(args.pieces, args.triangles, args.min_coverage, budget,
                               resume=args.resume,
                               progress=lambda msg: print(msg, file=sys.stderr))
    lines = [f"search pieces={args.pieces} triangles={args.triangles} "
             f"min_coverage={args.min_coverage}: {len(result.found)} found, "
             f"{result.candidates} candidates, stop={result.stop_reason}, "
             f"exhausted={result.exhausted}"]
    records = []
    for hit in result.found:
        lines.append(f"coverage {hit.coverage}: {hit.pieceset.describe()}")
        lines.append(f"  {encode_pieceset(hit.pieceset)}")
        records.append({"coverage": hit.coverage, "pieces": encode_pieceset(hit.pieceset),
                        "formable": list(hit.formable)})
    _emit(args, "\n".join(lines), {"found": records, "candidates": result.candidates,
                                   "exhausted": result.exhausted, "stop": result.stop_reason,
                                   "cursor": list(result.cursor)})
    return OK if result.found else UNSAT


def cmd_subclaims(args) -> int:
    claims = verify_ten_piece_subclaims()
    lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}" for c in claims]
    _emit(args, "\n".join(lines),
          {"claims": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in claims]})
    return OK if all(c.passed for c in claims) else UNSAT


def _positive(v: str) -> int:
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chie", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("targets", help="list the convex polygons of n triangles")
    p.add_argument("--n", type=_positive, default=16)
    p.add_argument("--svg", metavar="FILE")
    p.set_defaults(func=cmd_targets)

    p = sub.add_parser("solve", help="tile one target with a piece set")
    p.add_argument("--pieces", required=True, help="built-in name or piece file")
    p.add_argument("--target", required=True, help="catalog id (n16-t13) or polygon/triangle file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--all", action="store_true")
    p.add_argument("--modulo-symmetry", action="store_true")
    p.add_argument("--node-limit", type=int, default=0)
    p.add_argument("--svg", metavar="PATH", help="file (solve) or directory (--all)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("coverage", help="which convex targets a piece set forms")
    p.add_argument("--pieces", required=True)
    p.add_argument("--n", type=_positive, default=16)
    p.add_argument("--svg", metavar="DIR")
    p.add_argument("--timings", action="store_true", help="include wall-clock times")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("ftable", help="table of f(1..N)")
    p.add_argument("--max", type=_positive, default=16)
    p.add_argument("--plot", metavar="FILE")
    p.set_defaults(func=cmd_ftable)

    p = sub.add_parser("search", help="search piece sets for high coverage")
    p.add_argument("--pieces", type=_positive, required=True)
    p.add_argument("--triangles", type=_positive, default=16)
    p.add_argument("--min-coverage", type=int, required=True)
    p.add_argument("--max-candidates", type=_positive, default=1_000_000)
    p.add_argument("--max-nodes", type=_positive, default=1_000_000)
    p.add_argument("--time-limit", type=float, default=3600.0)
    p.add_argument("--max-results", type=_positive, default=1)
    p.add_argument("--checkpoint", metavar="FILE")
    p.add_argument("--resume", metavar="FILE")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("subclaims", help="check the ten-piece impossibility sub-claims")
    p.set_defaults(func=cmd_subclaims)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"chie: error: {exc}", file=sys.stderr)
        return USAGE
    except ValueError as exc:
        print(f"chie: error: {exc}", file=sys.stderr)
        return USAGE
    except (AssertionError, EnumerationGuardError) as exc:
        print(f"chie: internal invariant violated: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
