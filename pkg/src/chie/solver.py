"""Tiling a region with a piece set.

Decision, counting and enumeration all share one deterministic search
(``chie.kernel``): cover the least uncovered quarter cell in (y, x, q)
order, trying piece types in piece-set order and their placements in
canonical order.  Identical pieces are interchangeable, so solutions are
partitions of the region into congruent copies of the pieces.
"""
from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import kernel, lattice
from .lattice import D4, QuarterCell, Shape, Transform, apply_transform, cell_key
from .pieces import PieceSet, piece_name
from .targets import ConvexTarget, enumerate_targets, symmetries_of


@dataclass(frozen=True)
class Placement:
    piece: str
    cells: frozenset

    def key(self) -> tuple:
        return tuple(sorted(cell_key(c) for c in self.cells))

    def serialize(self) -> str:
        tris = " ".join(f"T {x} {y} {h}" for x, y, h in lattice.triangles(self.cells))
        return f"P {self.piece} @ {tris}"


@dataclass(frozen=True)
class Solution:
    placements: tuple  # sorted by cell key

    @classmethod
    def of(cls, placements) -> "Solution":
        return cls(tuple(sorted(placements, key=Placement.key)))

    def partition(self) -> frozenset:
        return frozenset(p.cells for p in self.placements)

    def serialize(self) -> str:
        return "\n".join(p.serialize() for p in self.placements)


@functools.lru_cache(maxsize=200_000)
def _orientations(shape: Shape) -> tuple[tuple[QuarterCell, ...], ...]:
    """Distinct normalized D4 images of a shape."""
    return tuple(sorted(set(lattice.images(shape.cells)), key=lambda cs: [cell_key(c) for c in cs]))


def placements_for(shape: Shape, region) -> list[frozenset]:
    """Every distinct cell set congruent to ``shape`` that lies inside ``region``."""
    region = frozenset(region)
    if not region:
        return []
    x0, y0, x1, y1 = lattice.bounding_box(region)
    out = []
    for cells in _orientations(shape):
        w = max(c.x for c in cells) + 1
        h = max(c.y for c in cells) + 1
        for dy in range(y0, y1 - h + 1):
            for dx in range(x0, x1 - w + 1):
                moved = frozenset(QuarterCell(c.x + dx, c.y + dy, c.q) for c in cells)
                if moved <= region:
                    out.append(moved)
    return out


class Problem:
    """A region indexed into bits plus per-piece-type placement tables."""

    def __init__(self, ps: PieceSet, region):
        self.pieceset = ps
        self.region = frozenset(region)
        self.cells = sorted(self.region, key=cell_key)
        self.index = {c: i for i, c in enumerate(self.cells)}
        self.ncells = len(self.cells)
        self.mults = [m for _, m in ps.pieces]
        self.names = [piece_name(s, i) for i, (s, _) in enumerate(ps.pieces)]
        self.placements: list[list[int]] = []
        self.table: list[list[list[int]]] = []
        for shape, _ in ps.pieces:
            masks = sorted(self.mask(p) for p in placements_for(shape, self.region))
            self.placements.append(masks)
            by_low: list[list[int]] = [[] for _ in range(self.ncells)]
            for m in masks:
                by_low[(m & -m).bit_length() - 1].append(m)
            self.table.append(by_low)

    def mask(self, cells) -> int:
        m = 0
        for c in cells:
            m |= 1 << self.index[c]
        return m

    def cells_of(self, mask: int) -> frozenset:
        return frozenset(self.cells[i] for i in range(self.ncells) if mask >> i & 1)

    def trivially_unsat(self) -> bool:
        if self.ncells != 2 * self.pieceset.total_triangles:
            return True
        return any(not pl for pl in self.placements)

    def solution(self, raw) -> Solution:
        return Solution.of(Placement(self.names[t], self.cells_of(m)) for t, m in raw)

    def run(self, max_solutions=0, node_limit=0, callback=None):
        if self.trivially_unsat():
            return 0, 0, True, None
        return kernel.solve(self.ncells, self.mults, self.table, max_solutions, node_limit, callback)


@dataclass
class SolveResult:
    sat: bool | None  # None: node limit reached before a verdict
    witness: Solution | None = None
    nodes: int = 0
    elapsed: float = 0.0


def solve(ps: PieceSet, region, node_limit: int = 0) -> SolveResult:
    start = time.perf_counter()
    prob = Problem(ps, region)
    count, nodes, complete, first = prob.run(max_solutions=1, node_limit=node_limit)
    elapsed = time.perf_counter() - start
    if count:
        return SolveResult(True, prob.solution(first), nodes, elapsed)
    return SolveResult(False if complete else None, None, nodes, elapsed)


def solve_exists(ps: PieceSet, region) -> tuple[bool, Solution | None]:
    r = solve(ps, region)
    return bool(r.sat), r.witness


def enumerate_solutions(ps: PieceSet, region,
                        sink: Callable[[Solution], bool | None] | None = None) -> Iterator[Solution] | int:
    """Emit every solution in search order.

    With a ``sink`` each solution is passed to it (return True to stop) and
    the number emitted is returned; without one a list-backed iterator is
    returned.
    """
    prob = Problem(ps, region)
    if sink is None:
        out: list[Solution] = []
        prob.run(callback=lambda raw: out.append(prob.solution(raw)))
        return iter(out)
    emitted = 0

    def cb(raw):
        nonlocal emitted
        emitted += 1
        return bool(sink(prob.solution(raw)))

    prob.run(callback=cb)
    return emitted


def region_transforms(region) -> list[Transform]:
    """Transforms mapping ``region`` onto itself (its D4 stabilizer)."""
    region = frozenset(region)
    x0, y0, _, _ = lattice.bounding_box(region)
    out = []
    for g in symmetries_of(region):
        img = apply_transform(region, Transform(g))
        ix, iy, _, _ = lattice.bounding_box(img)
        out.append(Transform(g, (x0 - ix, y0 - iy)))
    return out


def count_solutions(ps: PieceSet, region, modulo: str = "none") -> int:
    if modulo == "none":
        return Problem(ps, region).run()[0]
    if modulo != "region_symmetry":
        raise ValueError(f"unknown modulo {modulo!r}")
    prob = Problem(ps, region)
    transforms = region_transforms(region)
    seen: set = set()
    orbits = 0

    def cb(raw):
        nonlocal orbits
        part = frozenset(m for _, m in raw)
        if part in seen:
            return False
        orbits += 1
        for T in transforms:
            seen.add(frozenset(prob.mask(apply_transform(prob.cells_of(m), T)) for m in part))
        return False

    prob.run(callback=cb)
    return orbits


def check_solution(ps: PieceSet, region, sol: Solution) -> bool:
    """Independent soundness check of a witness."""
    region = frozenset(region)
    union: set = set()
    for p in sol.placements:
        if union & p.cells:
            return False
        union |= p.cells
    if union != region:
        return False
    want = sorted((s.key(), m) for s, m in ps.pieces)
    got: dict = {}
    for p in sol.placements:
        k = lattice.canonicalize(p.cells).key()
        got[k] = got.get(k, 0) + 1
    return sorted(got.items()) == want


@dataclass
class TargetVerdict:
    target: ConvexTarget
    formable: bool | None
    nodes: int
    elapsed: float
    witness: Solution | None = field(default=None, repr=False)


@dataclass
class CoverageReport:
    pieceset: str
    n: int
    verdicts: list

    @property
    def count(self) -> int:
        return sum(1 for v in self.verdicts if v.formable)

    @property
    def total(self) -> int:
        return len(self.verdicts)

    def formable_ids(self) -> list[str]:
        return [v.target.id for v in self.verdicts if v.formable]

    def text(self, timings: bool = True) -> str:
        lines = [f"coverage {self.pieceset} n={self.n}: {self.count}/{self.total}"]
        for v in self.verdicts:
            verdict = {True: "formable", False: "not-formable", None: "unknown"}[v.formable]
            row = f"{v.target.id} {verdict} nodes={v.nodes}"
            if timings:
                row += f" elapsed={v.elapsed:.4f}s"
            lines.append(row)
        return "\n".join(lines)

    def record(self, timings: bool = True) -> dict:
        rows = []
        for v in self.verdicts:
            row = {"target": v.target.id, "formable": v.formable, "nodes": v.nodes}
            if timings:
                row["elapsed"] = round(v.elapsed, 6)
            if v.witness is not None:
                row["witness"] = v.witness.serialize().splitlines()
            rows.append(row)
        return {"pieceset": self.pieceset, "n": self.n, "count": self.count,
                "total": self.total, "targets": rows}


def coverage(ps: PieceSet, n: int = 16, node_limit: int = 0, targets=None) -> CoverageReport:
    if ps.total_triangles != n:
        raise ValueError(f"piece set {ps.name} has {ps.total_triangles} triangles, not {n}")
    targets = enumerate_targets(n) if targets is None else targets
    verdicts = []
    for t in targets:
        r = solve(ps, t.region, node_limit=node_limit)
        verdicts.append(TargetVerdict(t, r.sat, r.nodes, r.elapsed, r.witness))
    return CoverageReport(ps.name, n, verdicts)
