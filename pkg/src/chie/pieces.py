"""Piece sets, the built-in puzzles, and the piece-file format.

Piece file::

    pieceset tangram
    # comment
    piece square x1
    T 0 0 NE
    T 0 0 SW

Each ``T x y half`` line is one unit triangle.  Blank lines separate pieces.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources

from . import lattice
from .lattice import LatticeError, Shape, canonicalize, from_triangles, neighbours


class PieceFileError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass(frozen=True)
class PieceSet:
    name: str
    pieces: tuple  # ((Shape, multiplicity), ...) sorted, shapes distinct

    @classmethod
    def of(cls, name: str, items) -> "PieceSet":
        """Build from ``(shape, multiplicity)`` pairs, merging duplicates."""
        merged: dict[Shape, int] = {}
        names: dict[Shape, str | None] = {}
        for shape, mult in items:
            if mult < 1:
                raise ValueError(f"multiplicity must be positive, got {mult}")
            canon = shape if _is_canonical(shape) else canonicalize(shape.cells)
            merged[canon] = merged.get(canon, 0) + mult
            names.setdefault(canon, shape.name)
        pieces = tuple(sorted(((s.named(names[s]), m) for s, m in merged.items()),
                              key=lambda sm: sm[0]))
        return cls(name, pieces)

    @property
    def total_triangles(self) -> int:
        return sum(s.size * m for s, m in self.pieces)

    @property
    def num_pieces(self) -> int:
        return sum(m for _, m in self.pieces)

    def shapes(self) -> list[Shape]:
        return [s for s, _ in self.pieces]

    def expanded(self) -> list[Shape]:
        return [s for s, m in self.pieces for _ in range(m)]

    def key(self) -> tuple:
        return tuple((s.key(), m) for s, m in self.pieces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PieceSet):
            return NotImplemented
        return self.name == other.name and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.name, self.key()))

    def describe(self) -> str:
        parts = []
        for s, m in self.pieces:
            label = s.name or f"{s.size}-abolo"
            parts.append(f"{label} x{m}" if m > 1 else label)
        return ", ".join(parts)


def _is_canonical(shape: Shape) -> bool:
    try:
        return canonicalize(shape.cells).cells == shape.cells
    except LatticeError:
        return False


def piece_name(shape: Shape, index: int) -> str:
    return shape.name or f"p{index}"


def serialize(ps: PieceSet) -> str:
    lines = [f"pieceset {ps.name}"]
    for i, (shape, mult) in enumerate(ps.pieces):
        lines.append("")
        lines.append(f"piece {piece_name(shape, i)} x{mult}")
        lines.append(shape.serialize())
    return "\n".join(lines) + "\n"


def parse_piece_file(text: str) -> PieceSet:
    name = None
    items: list[tuple[Shape, int]] = []
    current: tuple[str, int, int] | None = None  # (name, mult, header line)
    tris: list[tuple[int, int, str]] = []

    def flush() -> None:
        nonlocal current, tris
        if current is None:
            return
        pname, mult, at = current
        if not tris:
            raise PieceFileError(f"piece {pname!r} has no triangles", at)
        try:
            cells = from_triangles(tris)
            shape = canonicalize(cells, pname)
        except LatticeError as exc:
            raise PieceFileError(f"piece {pname!r}: {exc}", at) from None
        items.append((shape, mult))
        current, tris = None, []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "pieceset":
            if name is not None or len(words) != 2:
                raise PieceFileError("expected a single 'pieceset <name>' header", lineno)
            name = words[1]
        elif head == "piece":
            if name is None:
                raise PieceFileError("'piece' before 'pieceset' header", lineno)
            flush()
            if len(words) not in (2, 3):
                raise PieceFileError("expected 'piece <name> x<multiplicity>'", lineno)
            mult = 1
            if len(words) == 3:
                if not words[2].startswith("x") or not words[2][1:].isdigit():
                    raise PieceFileError(f"bad multiplicity {words[2]!r}", lineno)
                mult = int(words[2][1:])
                if mult < 1:
                    raise PieceFileError("multiplicity must be at least 1", lineno)
            current = (words[1], mult, lineno)
        elif head == "T":
            if current is None:
                raise PieceFileError("triangle outside a piece", lineno)
            if len(words) != 4 or words[3] not in lattice.HALVES:
                raise PieceFileError("expected 'T <x> <y> <NE|NW|SE|SW>'", lineno)
            try:
                tris.append((int(words[1]), int(words[2]), words[3]))
            except ValueError:
                raise PieceFileError("triangle coordinates must be integers", lineno) from None
        else:
            raise PieceFileError(f"unknown record {head!r}", lineno)
    flush()
    if name is None:
        raise PieceFileError("missing 'pieceset <name>' header")
    if not items:
        raise PieceFileError("piece set has no pieces")
    return PieceSet.of(name, items)


def load_piece_file(path) -> PieceSet:
    with open(path, encoding="utf-8") as fh:
        return parse_piece_file(fh.read())


def shape_from_polygon(vertices, name: str | None = None) -> Shape:
    return canonicalize(lattice.rasterize_polygon(vertices), name)


BUILTINS = ("TANGRAM", "SEI_SHONAGON", "NINETEEN", "ELEVEN")
_BUNDLED = {"SEI_SHONAGON": "sei_shonagon.txt", "NINETEEN": "nineteen.txt"}


@functools.lru_cache(maxsize=None)
def builtin(name: str) -> PieceSet:
    key = name.upper()
    if key == "TANGRAM":
        return PieceSet.of("tangram", [
            (shape_from_polygon([(0, 0), (2, 0), (0, 2)], "large-triangle"), 2),
            (shape_from_polygon([(0, 0), (2, 0), (1, 1)], "medium-triangle"), 1),
            (shape_from_polygon([(0, 0), (1, 0), (0, 1)], "small-triangle"), 2),
            (shape_from_polygon([(0, 0), (1, 0), (1, 1), (0, 1)], "square"), 1),
            (shape_from_polygon([(0, 0), (1, 0), (2, 1), (1, 1)], "parallelogram"), 1),
        ])
    if key == "ELEVEN":
        return PieceSet.of("eleven", [
            (shape_from_polygon([(0, 0), (1, 0), (2, 1), (1, 1)], "parallelogram"), 5),
            (shape_from_polygon([(0, 0), (1, 0), (0, 1)], "triangle"), 6),
        ])
    if key in _BUNDLED:
        try:
            text = resources.files("chie").joinpath("data", _BUNDLED[key]).read_text("utf-8")
        except FileNotFoundError:
            raise PieceFileError(f"bundled piece file for {key} is missing") from None
        return parse_piece_file(text)
    raise KeyError(f"unknown built-in piece set {name!r}; choose from {', '.join(BUILTINS)}")


def load_pieces(spec: str) -> PieceSet:
    """A built-in name or a path to a piece file."""
    if spec.upper() in BUILTINS:
        return builtin(spec)
    return load_piece_file(spec)


@functools.lru_cache(maxsize=None)
def enumerate_polyaboloes(k: int) -> tuple[Shape, ...]:
    """All free polyaboloes of ``k`` unit triangles, canonical and sorted."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return (canonicalize(lattice.unit_triangle(0, 0, "SE")),)
    out: set[tuple] = set()
    for shape in enumerate_polyaboloes(k - 1):
        cells = shape.region
        for tri in _adjacent_triangles(cells):
            out.add(lattice._min_image(cells | tri))
    return tuple(sorted(Shape(c) for c in out))


def _adjacent_triangles(cells: frozenset):
    """Unit triangles disjoint from ``cells`` that share an edge with them."""
    seen = set()
    for c in cells:
        for nb in neighbours(c):
            if nb in cells:
                continue
            for half, qs in lattice.HALVES.items():
                if nb.q not in qs:
                    continue
                tri = lattice.unit_triangle(nb.x, nb.y, half)
                if tri in seen or tri & cells:
                    continue
                seen.add(tri)
                yield tri
