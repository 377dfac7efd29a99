"""Quarter-cell lattice geometry.

Every unit square ``(x, y)`` is cut along both diagonals into four quarter
cells tagged by the square edge they touch (N, E, S, W).  A unit triangle
(legs 1, hypotenuse sqrt 2) is half a square and therefore exactly two
quarter cells, so both diagonal splits of a square live in one raster and
overlap/coverage questions reduce to set operations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence


class Quadrant(IntEnum):
    N = 0
    E = 1
    S = 2
    W = 3


N, E, S, W = Quadrant.N, Quadrant.E, Quadrant.S, Quadrant.W

# offsets of a quarter cell's interior point from the square centre, in
# quadrupled coordinates
_Q_OFFSET = {N: (0, 1), E: (1, 0), S: (0, -1), W: (-1, 0)}
_OFFSET_Q = {v: k for k, v in _Q_OFFSET.items()}


class QuarterCell(NamedTuple):
    x: int
    y: int
    q: Quadrant

    def sort_key(self) -> tuple[int, int, int]:
        return (self.y, self.x, int(self.q))

    def __repr__(self) -> str:
        return f"{self.q.name}({self.x},{self.y})"


Region = frozenset  # frozenset[QuarterCell]

HALVES = {
    "NE": (N, E),
    "NW": (N, W),
    "SE": (S, E),
    "SW": (S, W),
}
_PATTERN_HALF = {frozenset(v): k for k, v in HALVES.items()}
FULL = frozenset(Quadrant)


class LatticeError(ValueError):
    """Raised for regions or polygons that do not live on the lattice."""


def cell_key(c: QuarterCell) -> tuple[int, int, int]:
    return (c.y, c.x, int(c.q))


def sorted_cells(cells: Iterable[QuarterCell]) -> list[QuarterCell]:
    return sorted(cells, key=cell_key)


def unit_triangle(x: int, y: int, half: str) -> frozenset:
    """The two quarter cells making up the ``half`` triangle of square (x, y)."""
    try:
        a, b = HALVES[half]
    except KeyError:
        raise LatticeError(f"unknown half {half!r}") from None
    return frozenset((QuarterCell(x, y, a), QuarterCell(x, y, b)))


def squares(region: Iterable[QuarterCell]) -> dict[tuple[int, int], frozenset]:
    """Group a region's quarter cells by unit square."""
    out: dict[tuple[int, int], set] = {}
    for c in region:
        out.setdefault((c.x, c.y), set()).add(c.q)
    return {k: frozenset(v) for k, v in out.items()}


def check_pattern(region: Iterable[QuarterCell]) -> None:
    """Raise unless every square is empty, a half, or full."""
    for (x, y), qs in squares(region).items():
        if qs != FULL and qs not in _PATTERN_HALF:
            names = "".join(q.name for q in sorted(qs))
            raise LatticeError(f"square ({x},{y}) has invalid quarter pattern {names}")


def triangles(region: Iterable[QuarterCell]) -> list[tuple[int, int, str]]:
    """Decompose a region into unit triangles ``(x, y, half)``.

    Full squares are written as SW + NE.  The list is sorted.
    """
    out = []
    for (x, y), qs in squares(region).items():
        if qs == FULL:
            out.append((x, y, "NE"))
            out.append((x, y, "SW"))
        elif qs in _PATTERN_HALF:
            out.append((x, y, _PATTERN_HALF[qs]))
        else:
            check_pattern(region)
    return sorted(out)


def from_triangles(tris: Iterable[tuple[int, int, str]]) -> frozenset:
    """Union of unit triangles; raises if two triangles overlap."""
    cells: set = set()
    for x, y, half in tris:
        t = unit_triangle(x, y, half)
        if cells & t:
            raise LatticeError(f"triangle {half} at ({x},{y}) overlaps another triangle")
        cells |= t
    return frozenset(cells)


def neighbours(c: QuarterCell) -> Iterator[QuarterCell]:
    """Quarter cells sharing an edge with ``c``."""
    x, y, q = c
    yield QuarterCell(x, y, Quadrant((q + 1) % 4))
    yield QuarterCell(x, y, Quadrant((q + 3) % 4))
    if q == N:
        yield QuarterCell(x, y + 1, S)
    elif q == E:
        yield QuarterCell(x + 1, y, W)
    elif q == S:
        yield QuarterCell(x, y - 1, N)
    else:
        yield QuarterCell(x - 1, y, E)


def is_connected(region: Iterable[QuarterCell]) -> bool:
    cells = set(region)
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        for nb in neighbours(stack.pop()):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


# --- D4 -------------------------------------------------------------------

# (a, b, c, d) acting on column vectors as [[a, b], [c, d]]
D4: tuple[tuple[int, int, int, int], ...] = (
    (1, 0, 0, 1),    # identity
    (0, -1, 1, 0),   # rot 90 ccw
    (-1, 0, 0, -1),  # rot 180
    (0, 1, -1, 0),   # rot 270
    (1, 0, 0, -1),   # mirror in x axis
    (0, 1, 1, 0),    # mirror in y = x
    (-1, 0, 0, 1),   # mirror in y axis
    (0, -1, -1, 0),  # mirror in y = -x
)
D4_NAMES = ("id", "r90", "r180", "r270", "fx", "fd", "fy", "fa")
IDENTITY = 0


def _matmul(g: int, h: int) -> int:
    a, b, c, d = D4[g]
    e, f, gg, hh = D4[h]
    return D4.index((a * e + b * gg, a * f + b * hh, c * e + d * gg, c * f + d * hh))


D4_MUL = tuple(tuple(_matmul(g, h) for h in range(8)) for g in range(8))
D4_INV = tuple(next(h for h in range(8) if D4_MUL[g][h] == IDENTITY) for g in range(8))


@dataclass(frozen=True)
class Transform:
    """Point map ``p -> g(p) + t`` with ``g`` in D4 about the origin."""

    g: int = IDENTITY
    t: tuple[int, int] = (0, 0)

    def __matmul__(self, other: "Transform") -> "Transform":
        # (self @ other)(p) = self(other(p))
        a, b, c, d = D4[self.g]
        ox, oy = other.t
        return Transform(
            D4_MUL[self.g][other.g],
            (a * ox + b * oy + self.t[0], c * ox + d * oy + self.t[1]),
        )

    def inverse(self) -> "Transform":
        gi = D4_INV[self.g]
        a, b, c, d = D4[gi]
        tx, ty = self.t
        return Transform(gi, (-(a * tx + b * ty), -(c * tx + d * ty)))

    def apply_point(self, p: tuple) -> tuple:
        a, b, c, d = D4[self.g]
        x, y = p
        return (a * x + b * y + self.t[0], c * x + d * y + self.t[1])


def _map_cell(g: int, tx: int, ty: int, cell: QuarterCell) -> QuarterCell:
    a, b, c, d = D4[g]
    dx, dy = _Q_OFFSET[cell.q]
    X = 4 * cell.x + 2 + dx
    Y = 4 * cell.y + 2 + dy
    X, Y = a * X + b * Y + 4 * tx, c * X + d * Y + 4 * ty
    # probe points are never on a square boundary (X, Y not divisible by 4)
    sx, sy = X // 4, Y // 4
    return QuarterCell(sx, sy, _OFFSET_Q[(X - 4 * sx - 2, Y - 4 * sy - 2)])


def apply_transform(region: Iterable[QuarterCell], T: Transform) -> frozenset:
    tx, ty = T.t
    return frozenset(_map_cell(T.g, tx, ty, c) for c in region)


def normalize(region: Iterable[QuarterCell]) -> tuple[QuarterCell, ...]:
    """Translate so min x = min y = 0 and return the sorted cell tuple."""
    cells = list(region)
    mx = min(c.x for c in cells)
    my = min(c.y for c in cells)
    return tuple(sorted((QuarterCell(c.x - mx, c.y - my, c.q) for c in cells), key=cell_key))


def images(region: Iterable[QuarterCell]) -> list[tuple[QuarterCell, ...]]:
    """The 8 normalized D4 images of a region, indexed like ``D4``."""
    cells = frozenset(region)
    return [normalize(apply_transform(cells, Transform(g))) for g in range(8)]


def _min_image(region: frozenset) -> tuple[QuarterCell, ...]:
    return min(images(region), key=lambda cs: [cell_key(c) for c in cs])


@dataclass(frozen=True)
class Shape:
    """A connected polyabolo stored in canonical position."""

    cells: tuple[QuarterCell, ...]
    name: str | None = field(default=None, compare=False)

    @property
    def region(self) -> frozenset:
        return frozenset(self.cells)

    @property
    def size(self) -> int:
        """Number of unit triangles."""
        return len(self.cells) // 2

    def key(self) -> tuple:
        return tuple(cell_key(c) for c in self.cells)

    def __lt__(self, other: "Shape") -> bool:
        return (self.size, self.key()) < (other.size, other.key())

    def triangles(self) -> list[tuple[int, int, str]]:
        return triangles(self.cells)

    def serialize(self) -> str:
        return "\n".join(f"T {x} {y} {h}" for x, y, h in self.triangles())

    def named(self, name: str | None) -> "Shape":
        return Shape(self.cells, name)


def canonicalize(region: Iterable[QuarterCell], name: str | None = None) -> Shape:
    cells = frozenset(region)
    if not cells:
        raise LatticeError("empty region")
    check_pattern(cells)
    if not is_connected(cells):
        raise LatticeError("region is not edge-connected")
    return Shape(_min_image(cells), name)


# --- polygons ---------------------------------------------------------------

def shoelace2(vertices: Sequence[tuple[int, int]]) -> int:
    """Twice the signed area."""
    s = 0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s


def shoelace_area(vertices: Sequence[tuple[int, int]]) -> Fraction:
    return Fraction(shoelace2(vertices), 2)


def _is_45(dx: int, dy: int) -> bool:
    return (dx or dy) and (dx == 0 or dy == 0 or abs(dx) == abs(dy))


def check_polygon(vertices: Sequence[tuple[int, int]]) -> None:
    n = len(vertices)
    if n < 3:
        raise LatticeError("polygon needs at least 3 vertices")
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        if not _is_45(x1 - x0, y1 - y0):
            raise LatticeError(f"edge {i} is degenerate or not a multiple of 45 degrees")
    for i in range(n):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % n]
        cx, cy = vertices[(i + 2) % n]
        cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
        if cross < 0:
            raise LatticeError("polygon is not convex and counterclockwise")
        if cross == 0:
            raise LatticeError("polygon has a straight angle")
    if shoelace2(vertices) <= 0:
        raise LatticeError("polygon is clockwise or has zero area")
    # a convex ccw polygon turns through exactly 360 degrees; more means it wraps
    turn = 0
    dirs = []
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        dirs.append(_direction(x1 - x0, y1 - y0))
    for i in range(n):
        turn += (dirs[(i + 1) % n] - dirs[i]) % 8
    if turn != 8:
        raise LatticeError("polygon is not simple")


def _direction(dx: int, dy: int) -> int:
    sx = (dx > 0) - (dx < 0)
    sy = (dy > 0) - (dy < 0)
    return [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)].index((sx, sy))


def rasterize_polygon(vertices: Sequence[tuple[int, int]]) -> frozenset:
    """Quarter cells inside a convex ccw polygon with 45-degree edges."""
    vertices = [tuple(v) for v in vertices]
    check_polygon(vertices)
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    # quadrupled coordinates: no quarter-cell probe point lies on a lattice line
    edges = []
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        edges.append((4 * x0, 4 * y0, x1 - x0, y1 - y0))
    out = set()
    for x in range(min(xs), max(xs)):
        for y in range(min(ys), max(ys)):
            for q, (dx, dy) in _Q_OFFSET.items():
                X, Y = 4 * x + 2 + dx, 4 * y + 2 + dy
                if all(ex * (Y - oy) - ey * (X - ox) > 0 for ox, oy, ex, ey in edges):
                    out.add(QuarterCell(x, y, q))
    return frozenset(out)


def bounding_box(region: Iterable[QuarterCell]) -> tuple[int, int, int, int]:
    cells = list(region)
    return (
        min(c.x for c in cells),
        min(c.y for c in cells),
        max(c.x for c in cells) + 1,
        max(c.y for c in cells) + 1,
    )


def cell_polygon(c: QuarterCell) -> list[tuple[float, float]]:
    """Vertices of a quarter cell in lattice units."""
    x, y, q = c
    centre = (x + 0.5, y + 0.5)
    corners = {
        N: [(x + 1, y + 1), (x, y + 1)],
        E: [(x + 1, y), (x + 1, y + 1)],
        S: [(x, y), (x + 1, y)],
        W: [(x, y + 1), (x, y)],
    }[q]
    return [centre, *corners]
