"""Search for piece sets that form many convex targets.

Candidates are multisets of free polyaboloes: for each integer partition of
the triangle budget into ``num_pieces`` parts (partitions with the smallest
largest part first), every multiset of canonical shapes with those sizes.
A candidate is checked against a fit table (which shapes fit which targets
at all) before any tiling search, then target by target in fail-fast order
until it either reaches the threshold or has failed too often.
"""
from __future__ import annotations

import itertools
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import lattice
from .lattice import Shape
from .pieces import PieceSet, enumerate_polyaboloes, shape_from_polygon
from .solver import coverage, placements_for, solve
from .targets import enumerate_targets

log = logging.getLogger(__name__)

PROGRESS_EVERY = 10_000


@dataclass
class SearchBudget:
    max_candidates: int = 1_000_000
    max_solver_nodes: int = 1_000_000
    wall_clock: float = 3600.0
    max_results: int = 1
    checkpoint: str | None = None
    checkpoint_every: int = 2_000

    def __post_init__(self) -> None:
        for name in ("max_candidates", "max_solver_nodes", "wall_clock", "max_results",
                     "checkpoint_every"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class Found:
    coverage: int
    pieceset: PieceSet
    formable: tuple  # target ids

    def line(self) -> str:
        return f"found {self.coverage} {encode_pieceset(self.pieceset)}"


@dataclass
class SearchResult:
    found: list = field(default_factory=list)
    exhausted: bool = False
    candidates: int = 0
    pruned: int = 0
    unknown: int = 0  # solver calls cut off by the node limit
    cursor: tuple = (0, 0)
    stop_reason: str = ""

    @property
    def best(self) -> Found | None:
        return max(self.found, key=lambda f: f.coverage, default=None)


def encode_pieceset(ps: PieceSet) -> str:
    parts = []
    for shape, mult in ps.pieces:
        tris = " ".join(f"{x},{y},{h}" for x, y, h in shape.triangles())
        parts.append(f"x{mult}:{tris}")
    return ";".join(parts)


def decode_pieceset(text: str, name: str = "found") -> PieceSet:
    items = []
    for part in text.split(";"):
        mult, tris = part.split(":")
        triples = [t.split(",") for t in tris.split()]
        cells = lattice.from_triangles((int(x), int(y), h) for x, y, h in triples)
        items.append((lattice.canonicalize(cells), int(mult[1:])))
    return PieceSet.of(name, items)


def partitions(total: int, parts: int) -> list[tuple[int, ...]]:
    """Partitions of ``total`` into exactly ``parts`` positive parts.

    Each is non-increasing; ordered by largest part, then lexicographically.
    """
    out = []

    def rec(left, k, cap, acc):
        if k == 0:
            if left == 0:
                out.append(tuple(acc))
            return
        for p in range(min(cap, left - (k - 1)), 0, -1):
            if p * k < left:
                break
            rec(left - p, k - 1, p, acc + [p])

    rec(total, parts, total, [])
    return sorted(out, key=lambda p: (p[0], p))


def candidates_for(partition: tuple[int, ...]):
    """Multisets of canonical shapes whose sizes match ``partition``."""
    sizes = sorted(set(partition))
    choices = [
        list(itertools.combinations_with_replacement(enumerate_polyaboloes(s), partition.count(s)))
        for s in sizes
    ]
    for combo in itertools.product(*choices):
        yield [shape for group in combo for shape in group]


def _as_pieceset(shapes: list[Shape]) -> PieceSet:
    return PieceSet.of("candidate", [(s, 1) for s in shapes])


class FitTable:
    """Memo of which shapes have any placement in which targets."""

    def __init__(self, targets):
        self.targets = targets
        self.masks: dict[Shape, int] = {}

    def mask(self, shape: Shape) -> int:
        m = self.masks.get(shape)
        if m is None:
            m = 0
            for i, t in enumerate(self.targets):
                if placements_for(shape, t.region):
                    m |= 1 << i
            self.masks[shape] = m
        return m


def thinness(t) -> float:
    # perimeter^2 / area, larger is thinner
    perim = 0.0
    vs = t.vertices
    for i in range(len(vs)):
        (x0, y0), (x1, y1) = vs[i], vs[(i + 1) % len(vs)]
        perim += ((x1 - x0) ** 2 + (y1 - y0) ** 2) ** 0.5
    return perim * perim / t.triangles


class Evaluator:
    def __init__(self, n: int, min_coverage: int, node_limit: int):
        self.targets = enumerate_targets(n)
        self.min_coverage = min_coverage
        self.node_limit = node_limit
        self.fits = FitTable(self.targets)
        self.order = sorted(range(len(self.targets)), key=lambda i: -thinness(self.targets[i]))
        self.failures = [0] * len(self.targets)
        self.seen = 0
        self.unknown = 0

    def evaluate(self, shapes: list[Shape]) -> Found | None:
        """None if pruned or below threshold; else the full coverage record."""
        fit = (1 << len(self.targets)) - 1
        for s in shapes:
            fit &= self.fits.mask(s)
        if bin(fit).count("1") < self.min_coverage:
            return None
        ps = _as_pieceset(shapes)
        allowed = len(self.targets) - self.min_coverage
        failed = len(self.targets) - bin(fit).count("1")
        formable = []
        for i in self.order:
            if not fit >> i & 1:
                continue
            r = solve(ps, self.targets[i].region, node_limit=self.node_limit)
            if r.sat:
                formable.append(i)
            else:
                if r.sat is None:
                    self.unknown += 1
                self.failures[i] += 1
                failed += 1
                if failed > allowed:
                    break
        self.seen += 1
        if self.seen % 1000 == 0:
            # empirical fail-fast order: most frequently failing targets first
            self.order.sort(key=lambda i: -self.failures[i])
        if failed > allowed:
            return None
        ids = tuple(sorted(self.targets[i].id for i in formable))
        return Found(len(ids), ps, ids)


_worker_eval: Evaluator | None = None


def _worker_init(n, min_coverage, node_limit):
    global _worker_eval
    _worker_eval = Evaluator(n, min_coverage, node_limit)


def _worker_run(chunk):
    before = _worker_eval.unknown
    hits = [_worker_eval.evaluate(shapes) for shapes in chunk]
    return hits, _worker_eval.unknown - before


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CHIE_THREADS", "1")))
    except ValueError:
        return 1


def write_checkpoint(path, cursor, result: SearchResult, params) -> None:
    lines = [
        f"params {' '.join(str(p) for p in params)}",
        f"partition {cursor[0]}",
        f"cursor {cursor[1]}",
        f"candidates {result.candidates}",
        f"pruned {result.pruned}",
        f"unknown {result.unknown}",
    ]
    lines += [f.line() for f in result.found]
    tmp = Path(str(path) + ".tmp")
    tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def read_checkpoint(path) -> tuple[tuple, tuple, SearchResult]:
    params, part, cur = (), 0, 0
    result = SearchResult()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        head, _, rest = line.partition(" ")
        if head == "params":
            params = tuple(int(v) for v in rest.split())
        elif head == "partition":
            part = int(rest)
        elif head == "cursor":
            cur = int(rest)
        elif head == "candidates":
            result.candidates = int(rest)
        elif head == "pruned":
            result.pruned = int(rest)
        elif head == "unknown":
            result.unknown = int(rest)
        elif head == "found":
            cov, enc = rest.split(" ", 1)
            result.found.append(Found(int(cov), decode_pieceset(enc), ()))
    return params, (part, cur), result


def search_piece_sets(num_pieces: int, num_triangles: int, min_coverage: int,
                      budget: SearchBudget | None = None, resume: str | None = None,
                      progress=None) -> SearchResult:
    """Find piece sets of ``num_pieces`` pieces reaching ``min_coverage``.

    Stops at ``budget.max_results`` hits, the candidate or time budget, or
    when the space is exhausted.  Every hit is re-verified by a full
    coverage run, so its reported coverage is exact.
    """
    budget = budget or SearchBudget()
    if not 1 <= num_pieces <= num_triangles:
        raise ValueError("need 1 <= num_pieces <= num_triangles")
    targets = enumerate_targets(num_triangles)
    if not 0 <= min_coverage <= len(targets):
        raise ValueError(f"min_coverage must be within 0..{len(targets)}")
    params = (num_pieces, num_triangles, min_coverage)
    start_cursor = (0, 0)
    result = SearchResult()
    if resume and Path(resume).exists():
        saved, start_cursor, result = read_checkpoint(resume)
        if saved and saved != params:
            raise ValueError(f"checkpoint {resume} was written for parameters {saved}")
        for f in result.found:
            rep = coverage(f.pieceset, num_triangles)
            f.formable = tuple(rep.formable_ids())
    ckpt = budget.checkpoint or resume
    parts = partitions(num_triangles, num_pieces)
    threads = _threads()
    evaluator = Evaluator(num_triangles, min_coverage, budget.max_solver_nodes)
    pool = None
    if threads > 1:
        pool = ProcessPoolExecutor(threads, initializer=_worker_init,
                                   initargs=(num_triangles, min_coverage, budget.max_solver_nodes))
    t0 = time.monotonic()
    done_this_run = 0
    last_ckpt = 0
    stop = ""
    cursor = start_cursor
    chunk_size = 64 * threads

    def record(shapes, hit):
        nonlocal stop
        result.candidates += 1
        if hit is None:
            result.pruned += 1
            return
        rep = coverage(hit.pieceset, num_triangles)
        if rep.count < min_coverage:
            raise AssertionError("coverage re-verification disagrees with the search")
        hit.coverage = rep.count
        hit.formable = tuple(rep.formable_ids())
        hit.pieceset = PieceSet.of(f"found-{len(result.found)}", list(hit.pieceset.pieces))
        result.found.append(hit)
        log.info("hit: coverage %d with %s", hit.coverage, hit.pieceset.describe())
        if len(result.found) >= budget.max_results:
            stop = "max_results"

    try:
        for pi in range(start_cursor[0], len(parts)):
            gen = candidates_for(parts[pi])
            skip = start_cursor[1] if pi == start_cursor[0] else 0
            ci = skip
            gen = itertools.islice(gen, skip, None)
            while not stop:
                chunk = list(itertools.islice(gen, chunk_size))
                if not chunk:
                    break
                if pool is not None:
                    subs = [chunk[i::threads] for i in range(threads)]
                    outs = list(pool.map(_worker_run, subs))
                    hits = [None] * len(chunk)
                    for k, (out, unknown) in enumerate(outs):
                        result.unknown += unknown
                        for j, h in enumerate(out):
                            hits[k + j * threads] = h
                else:
                    before = evaluator.unknown
                    hits = [evaluator.evaluate(shapes) for shapes in chunk]
                    result.unknown += evaluator.unknown - before
                for shapes, hit in zip(chunk, hits):
                    record(shapes, hit)
                    ci += 1
                    done_this_run += 1
                    cursor = (pi, ci)
                    if progress and result.candidates % PROGRESS_EVERY == 0:
                        progress(f"candidates={result.candidates} partition={parts[pi]} "
                                 f"hits={len(result.found)} elapsed={time.monotonic() - t0:.1f}s")
                    if stop:
                        break
                    if done_this_run >= budget.max_candidates:
                        stop = "max_candidates"
                        break
                    if time.monotonic() - t0 > budget.wall_clock:
                        stop = "wall_clock"
                        break
                if ckpt and result.candidates - last_ckpt >= budget.checkpoint_every:
                    write_checkpoint(ckpt, cursor, result, params)
                    last_ckpt = result.candidates
            if stop:
                break
            cursor = (pi + 1, 0)
    finally:
        if pool is not None:
            pool.shutdown()
    result.cursor = cursor
    result.stop_reason = stop or "exhausted"
    # a node-limited verdict means the space was not fully decided
    result.exhausted = not stop and result.unknown == 0
    if ckpt:
        write_checkpoint(ckpt, cursor, result, params)
    return result


# --- impossibility sub-claims for ten pieces -------------------------------

@dataclass
class SubClaim:
    name: str
    passed: bool
    detail: str


def _connected_subregions(tris: list[frozenset]):
    """All edge-connected unions of the given unit triangles."""
    adj = {i: set() for i in range(len(tris))}
    for i, a in enumerate(tris):
        for j, b in enumerate(tris):
            if i < j and any(nb in b for c in a for nb in lattice.neighbours(c)):
                adj[i].add(j)
                adj[j].add(i)
    seen = set()
    out = []
    # grow connected sets from each start, restricted to larger indices
    for s in range(len(tris)):
        stack = [(frozenset([s]), frozenset(adj[s]))]
        while stack:
            cur, frontier = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            out.append(cur)
            for v in frontier:
                if v > s and v not in cur:
                    stack.append((cur | {v}, (frontier | adj[v]) - cur - {v}))
    return [frozenset().union(*(tris[i] for i in c)) for c in out]


def verify_ten_piece_subclaims() -> list[SubClaim]:
    targets = enumerate_targets(16)
    by_spec = {t.spec: t for t in targets}
    strip = by_spec[(0, 0, 1, 8, 0, 0, 1, 8)]      # 1 x 8*sqrt2 parallelogram
    square = by_spec[(0, 2, 0, 2, 0, 2, 0, 2)]     # side 2*sqrt2 square
    para = shape_from_polygon([(0, 0), (1, 0), (2, 1), (1, 1)])
    tri = shape_from_polygon([(0, 0), (1, 0), (0, 1)])
    trapezoid = shape_from_polygon([(0, 0), (3, 0), (2, 1), (1, 1)])
    claims = []

    # (a) shapes of >= 3 triangles fitting the strip all contain a parallelogram
    strip_tris = [lattice.unit_triangle(x, y, h) for x, y, h in lattice.triangles(strip.region)]
    shapes = {lattice.canonicalize(r) for r in _connected_subregions(strip_tris)}
    big = [s for s in shapes if s.size >= 3]
    bad = [s for s in big if not placements_for(para, s.region)]
    claims.append(SubClaim(
        "strip-pieces-contain-parallelogram", not bad,
        f"{len(big)} shapes of >=3 triangles fit the 1x8sqrt2 parallelogram; "
        f"{len(bad)} lack a 1xsqrt2 parallelogram"))

    # which other targets exclude every such shape
    excluding = [t.id for t in targets
                 if t is not strip and not any(placements_for(s, t.region) for s in big)]
    claims.append(SubClaim(
        "companion-target-excludes-large-strip-pieces", bool(excluding),
        "targets admitting no strip piece of >=3 triangles: " + (", ".join(excluding) or "none")))

    # counting: 2p + s = 16 with p + s <= 10 forces p >= 6
    options = [(p, 16 - 2 * p) for p in range(9) if p + (16 - 2 * p) <= 10]
    claims.append(SubClaim(
        "at-least-six-parallelograms", all(p >= 6 for p, _ in options),
        "feasible (parallelograms, triangles) with <=10 pieces: " + str(options)))

    # (b) the square cannot be tiled once six parallelograms are present
    verdicts = []
    for p, s in options:
        ps = PieceSet.of("para-tri", [(para, p)] + ([(tri, s)] if s else []))
        r = solve(ps, square.region)
        verdicts.append((p, s, r.sat, r.nodes))
    claims.append(SubClaim(
        "six-parallelograms-not-in-square", all(v[2] is False for v in verdicts),
        "; ".join(f"{p}P+{s}T: {'SAT' if sat else 'UNSAT'} ({nodes} nodes)"
                  for p, s, sat, nodes in verdicts)))

    # the same fact by a direct packing scan, independent of the tiler
    packings = _six_parallelogram_packings(para, square.region)
    claims.append(SubClaim(
        "six-parallelogram-packing-scan", packings[1] == 0,
        f"{packings[0]} packings of six parallelograms in the square; "
        f"{packings[1]} leave a remainder tileable by unit triangles"))

    # each edge-incident triangle puts both of its hypotenuse quarters on the boundary
    boundary = sum(1 for c in square.region
                   if any(nb not in square.region for nb in lattice.neighbours(c))) // 2
    claims.append(SubClaim(
        "square-perimeter-triangles", boundary == 8,
        f"{boundary} unit triangles of the square touch its perimeter"))

    fits = placements_for(trapezoid, strip.region)
    claims.append(SubClaim(
        "trapezoid-not-in-strip", not fits,
        f"{len(fits)} placements of the base-3 trapezoid in the 1x8sqrt2 parallelogram"))
    return claims


def _six_parallelogram_packings(para: Shape, region: frozenset) -> tuple[int, int]:
    pl = sorted(placements_for(para, region), key=lambda c: sorted(map(lattice.cell_key, c)))
    total = 0
    good = 0
    for combo in itertools.combinations(range(len(pl)), 6):
        used: set = set()
        ok = True
        for i in combo:
            if used & pl[i]:
                ok = False
                break
            used |= pl[i]
        if not ok:
            continue
        total += 1
        rest = region - used
        # a remainder made of whole halves and squares is tileable by unit triangles
        try:
            lattice.check_pattern(rest)
        except lattice.LatticeError:
            continue
        good += 1
    return total, good
