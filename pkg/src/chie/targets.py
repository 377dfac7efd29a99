"""Convex 45-degree polygons made of ``n`` unit triangles.

A convex polygon whose edges point along multiples of 45 degrees uses each
of the eight directions at most once, so it is an "octagon" with some zero
sides.  ``OctagonSpec`` holds the eight side lengths in ccw direction order
E, NE, N, NW, W, SW, S, SE (diagonal sides counted in multiples of sqrt 2).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from math import isqrt

from . import lattice
from .lattice import D4, Transform, apply_transform, normalize

DIRECTIONS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
DIRECTION_NAMES = ("E", "NE", "N", "NW", "W", "SW", "S", "SE")


class SpecError(ValueError):
    pass


OctagonSpec = tuple  # (m1, k1, m2, k2, m3, k3, m4, k4)


def closure(spec: OctagonSpec) -> tuple[int, int]:
    x = sum(n * d[0] for n, d in zip(spec, DIRECTIONS))
    y = sum(n * d[1] for n, d in zip(spec, DIRECTIONS))
    return x, y


def polygon_from_spec(spec: OctagonSpec) -> list[tuple[int, int]]:
    spec = tuple(spec)
    if len(spec) != 8 or any(n < 0 for n in spec):
        raise SpecError(f"spec must be 8 non-negative integers, got {spec}")
    if closure(spec) != (0, 0):
        raise SpecError(f"spec {spec} does not close")
    if sum(1 for n in spec if n) < 3:
        raise SpecError(f"spec {spec} has fewer than 3 sides")
    pts = [(0, 0)]
    for n, (dx, dy) in zip(spec, DIRECTIONS):
        if n:
            x, y = pts[-1]
            pts.append((x + n * dx, y + n * dy))
    pts.pop()
    if lattice.shoelace2(pts) <= 0:
        raise SpecError(f"spec {spec} has zero area")
    return pts


def spec_area2(spec: OctagonSpec) -> int:
    """Twice the area, i.e. the number of unit triangles."""
    return lattice.shoelace2(polygon_from_spec(spec))


def spec_images(spec: OctagonSpec) -> list[OctagonSpec]:
    """The 8 D4 images acting on the direction ring."""
    out = []
    for r in range(4):
        rot = tuple(spec[(j - 2 * r) % 8] for j in range(8))
        out.append(rot)
        out.append(tuple(rot[(4 - j) % 8] for j in range(8)))
    return out


def canonical_spec(spec: OctagonSpec) -> OctagonSpec:
    return min(spec_images(tuple(spec)))


def spec_from_polygon(vertices) -> OctagonSpec:
    """Inverse of ``polygon_from_spec`` up to the starting vertex."""
    lengths = [0] * 8
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        d = lattice._direction(x1 - x0, y1 - y0)
        lengths[d] += max(abs(x1 - x0), abs(y1 - y0))
    return tuple(lengths)


def candidate_specs(n: int) -> set[OctagonSpec]:
    """Canonical specs of every 45-degree convex lattice polygon of area n/2.

    Parametrized by the bounding box W x H and the four corner cuts
    k1..k4 (the diagonal sides), with area condition
    2*W*H - sum(k_i^2) = n.  Such a polygon is at least sqrt(2)/2 wide, so
    its diameter, and hence W and H, is below 2n.  Opposite cuts share a
    side (k1 + k2 <= H, k3 + k4 <= H), which forces
    2*W*H - n <= 2*min(W, H)^2 and keeps W close to H.
    """
    out = set()
    for w in range(1, 2 * n + 1):
        for h in range(1, 2 * n + 1):
            rest = 2 * w * h - n
            if rest < 0 or rest > 2 * min(w, h) ** 2:
                continue
            for k1 in range(min(w, h, isqrt(rest)) + 1):
                r1 = rest - k1 * k1
                for k2 in range(min(h - k1, w, isqrt(r1)) + 1):
                    r2 = r1 - k2 * k2
                    for k3 in range(min(w - k2, h, isqrt(r2)) + 1):
                        r3 = r2 - k3 * k3
                        k4 = isqrt(r3)
                        if k4 * k4 != r3:
                            continue
                        m1 = w - k4 - k1
                        m2 = h - k1 - k2
                        m3 = w - k2 - k3
                        m4 = h - k3 - k4
                        if min(m1, m2, m3, m4) < 0:
                            continue
                        spec = (m1, k1, m2, k2, m3, k3, m4, k4)
                        if sum(1 for v in spec if v) < 3:
                            continue
                        out.add(canonical_spec(spec))
    return out


def symmetries_of(region: frozenset) -> tuple[int, ...]:
    """D4 elements g with g(region) a translate of region."""
    base = normalize(region)
    return tuple(
        g for g in range(8) if normalize(apply_transform(region, Transform(g))) == base
    )


def target_symmetries(t: "ConvexTarget") -> tuple[int, ...]:
    return t.symmetries


@dataclass(frozen=True)
class ConvexTarget:
    id: str
    spec: OctagonSpec
    vertices: tuple
    region: frozenset = field(repr=False)
    triangles: int
    symmetries: tuple

    @property
    def n(self) -> int:
        return self.triangles

    def record(self) -> dict:
        return {
            "id": self.id,
            "n": self.triangles,
            "spec": list(self.spec),
            "vertices": [list(v) for v in self.vertices],
            "symmetries": [lattice.D4_NAMES[g] for g in self.symmetries],
        }


def make_target(spec: OctagonSpec, target_id: str = "") -> ConvexTarget:
    spec = canonical_spec(spec)
    verts = polygon_from_spec(spec)
    mx = min(v[0] for v in verts)
    my = min(v[1] for v in verts)
    verts = [(x - mx, y - my) for x, y in verts]
    i = verts.index(min(verts))
    verts = verts[i:] + verts[:i]
    region = lattice.rasterize_polygon(verts)
    return ConvexTarget(
        id=target_id,
        spec=spec,
        vertices=tuple(verts),
        region=region,
        triangles=len(region) // 2,
        symmetries=symmetries_of(region),
    )


class EnumerationGuardError(RuntimeError):
    """A candidate polygon failed tiling verification with unit triangles."""


@functools.lru_cache(maxsize=None)
def enumerate_targets(n: int, verify: bool = True) -> tuple[ConvexTarget, ...]:
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for i, spec in enumerate(sorted(candidate_specs(n))):
        t = make_target(spec, f"n{n}-t{i:02d}")
        if verify:
            _verify_tileable(t)
        out.append(t)
    return tuple(out)


def _verify_tileable(t: ConvexTarget) -> None:
    from .pieces import PieceSet
    from .solver import solve_exists

    ps = PieceSet.of("singles", [(unit_triangle_shape(), t.triangles)])
    ok, _ = solve_exists(ps, t.region)
    if not ok:
        raise EnumerationGuardError(f"{t.id} {t.spec} is not tileable by unit triangles")


@functools.lru_cache(maxsize=None)
def unit_triangle_shape() -> lattice.Shape:
    return lattice.canonicalize(lattice.unit_triangle(0, 0, "SE"), "triangle")


def f(n: int) -> int:
    return len(enumerate_targets(n))


def get_target(target_id: str) -> ConvexTarget:
    try:
        head, tail = target_id.split("-t")
        n = int(head.lstrip("n"))
        idx = int(tail)
    except ValueError:
        raise KeyError(f"malformed target id {target_id!r}") from None
    targets = enumerate_targets(n)
    if not 0 <= idx < len(targets):
        raise KeyError(f"unknown target id {target_id!r}")
    return targets[idx]


def find_target(n: int, vertices) -> ConvexTarget:
    """Catalog entry congruent to the given polygon."""
    spec = canonical_spec(spec_from_polygon(vertices))
    for t in enumerate_targets(n):
        if t.spec == spec:
            return t
    raise KeyError(f"no target with spec {spec} for n={n}")
