"""SVG output for solutions, target catalogs and the f(n) table."""
from __future__ import annotations

from xml.sax.saxutils import escape

from . import lattice
from .lattice import E, N, S, W, QuarterCell

UNIT = 32  # px per lattice unit
MARGIN = 16
PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
)


def _corners(x: int, y: int, q) -> tuple:
    return {
        N: ((x, y + 1), (x + 1, y + 1)),
        E: ((x + 1, y), (x + 1, y + 1)),
        S: ((x, y), (x + 1, y)),
        W: ((x, y), (x, y + 1)),
    }[q]


def _edges(c: QuarterCell):
    """(neighbour, segment) for the three edges of a quarter cell."""
    x, y, q = c
    mine = _corners(x, y, q)
    out = []
    for nb in lattice.neighbours(c):
        if (nb.x, nb.y) != (x, y):
            out.append((nb, mine))
        else:
            # half-diagonal from the centre to the corner both quarters share
            common = next(p for p in mine if p in _corners(x, y, nb.q))
            out.append((nb, ((x + 0.5, y + 0.5), common)))
    return out


def outline_segments(cells) -> list:
    cells = frozenset(cells)
    segs = set()
    for c in cells:
        for nb, (a, b) in _edges(c):
            if nb not in cells:
                segs.add((min(a, b), max(a, b)))
    return sorted(segs)


class Canvas:
    def __init__(self, x0: float, y0: float, x1: float, y1: float, scale: int = UNIT):
        self.x0, self.y0, self.x1, self.y1 = x0, y0, x1, y1
        self.scale = scale
        self.parts: list[str] = []

    def pt(self, p) -> str:
        x = MARGIN + (p[0] - self.x0) * self.scale
        y = MARGIN + (self.y1 - p[1]) * self.scale
        return f"{x:g},{y:g}"

    def region(self, cells, fill: str, stroke: str = "#222", label: str | None = None) -> None:
        cells = frozenset(cells)
        tris = " ".join(
            "M" + " L".join(self.pt(p) for p in lattice.cell_polygon(c)) + " Z"
            for c in lattice.sorted_cells(cells)
        )
        title = f"<title>{escape(label)}</title>" if label else ""
        self.parts.append(f'<path d="{tris}" fill="{fill}" stroke="{fill}" stroke-width="0.5">{title}</path>')
        path = " ".join(f"M{self.pt(a)} L{self.pt(b)}" for a, b in outline_segments(cells))
        self.parts.append(f'<path d="{path}" fill="none" stroke="{stroke}" stroke-width="1.5" '
                          f'stroke-linecap="round"/>')

    def text(self, p, s: str, size: int = 12) -> None:
        x, y = self.pt(p).split(",")
        self.parts.append(f'<text x="{x}" y="{y}" font-family="sans-serif" font-size="{size}" '
                          f'text-anchor="middle">{escape(s)}</text>')

    def svg(self) -> str:
        w = (self.x1 - self.x0) * self.scale + 2 * MARGIN
        h = (self.y1 - self.y0) * self.scale + 2 * MARGIN
        body = "\n".join(self.parts)
        return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:g}" height="{h:g}" '
                f'viewBox="0 0 {w:g} {h:g}">\n{body}\n</svg>\n')


def solution_svg(solution, title: str | None = None) -> str:
    cells = frozenset().union(*(p.cells for p in solution.placements))
    x0, y0, x1, y1 = lattice.bounding_box(cells)
    top = y1 + (1 if title else 0)
    cv = Canvas(x0, y0, x1, top)
    for i, p in enumerate(solution.placements):
        cv.region(p.cells, PALETTE[i % len(PALETTE)], label=p.piece)
    if title:
        cv.text(((x0 + x1) / 2, y1 + 0.4), title)
    return cv.svg()


def catalog_svg(targets, columns: int = 5, fill: str = "#cfd8e3") -> str:
    """Grid sheet of target outlines with their ids."""
    if not targets:
        return Canvas(0, 0, 1, 1).svg()
    boxes = [lattice.bounding_box(t.region) for t in targets]
    cw = max(b[2] - b[0] for b in boxes) + 1
    ch = max(b[3] - b[1] for b in boxes) + 2
    rows = (len(targets) + columns - 1) // columns
    cols = min(columns, len(targets))
    cv = Canvas(0, 0, cols * cw, rows * ch)
    for i, (t, b) in enumerate(zip(targets, boxes)):
        col, row = i % columns, i // columns
        ox = col * cw - b[0]
        oy = (rows - 1 - row) * ch + 1 - b[1]
        moved = lattice.apply_transform(t.region, lattice.Transform(0, (ox, oy)))
        cv.region(moved, fill, label=t.id)
        cv.text((col * cw + (b[2] - b[0]) / 2, (rows - 1 - row) * ch + 0.3), t.id, size=10)
    return cv.svg()


def ftable_svg(values: dict[int, int]) -> str:
    """Point-and-line chart of f(n)."""
    ns = sorted(values)
    top = max(values.values())
    w, h = 480, 320
    pad = 40

    def px(n, v):
        x = pad + (n - ns[0]) * (w - 2 * pad) / max(1, ns[-1] - ns[0])
        y = h - pad - v * (h - 2 * pad) / max(1, top)
        return f"{x:.1f},{y:.1f}"

    pts = " ".join(px(n, values[n]) for n in ns)
    parts = [
        f'<line x1="{pad}" y1="{h - pad}" x2="{w - pad}" y2="{h - pad}" stroke="#222"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{h - pad}" stroke="#222"/>',
        f'<polyline points="{pts}" fill="none" stroke="{PALETTE[0]}" stroke-width="1.5"/>',
    ]
    for n in ns:
        x, y = px(n, values[n]).split(",")
        parts.append(f'<circle cx="{x}" cy="{y}" r="3" fill="{PALETTE[1]}"><title>f({n})={values[n]}</title></circle>')
        parts.append(f'<text x="{x}" y="{h - pad + 14}" font-family="sans-serif" font-size="10" '
                     f'text-anchor="middle">{n}</text>')
    parts.append(f'<text x="{w / 2}" y="{h - 6}" font-family="sans-serif" font-size="12" '
                 f'text-anchor="middle">n</text>')
    parts.append(f'<text x="12" y="{h / 2}" font-family="sans-serif" font-size="12">f(n)</text>')
    body = "\n".join(parts)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">\n{body}\n</svg>\n')
