"""Integer grid points of the device boundary polygon."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mdlc.frontend.ast import BoundaryLine

Point = tuple[int, int]


class PlaceError(ValueError):
    pass


def polygon_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def segment_points(p1: Point, p2: Point) -> list[Point]:
    """Integer points on the closed segment, from p1 to p2."""
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    g = math.gcd(abs(dx), abs(dy))
    if g == 0:
        return [p1]
    return [(p1[0] + k * dx // g, p1[1] + k * dy // g) for k in range(g + 1)]


def inside_polygon(px: np.ndarray, py: np.ndarray, vertices) -> np.ndarray:
    """Even-odd ray casting; points exactly on an edge may land either way."""
    inside = np.zeros(px.shape, dtype=bool)
    n = len(vertices)
    for k in range(n):
        x1, y1 = vertices[k]
        x2, y2 = vertices[(k + 1) % n]
        if y1 == y2:
            continue
        crosses = (y1 > py) != (y2 > py)
        xs = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (px < xs)
    return inside


@dataclass
class GridDomain:
    vertices: list[Point]
    interior: list[Point]  # strictly inside, lexicographic order
    boundary: dict[str, list[Point]]  # line name -> points from p1 to p2
    area: float

    @property
    def points(self) -> list[Point]:
        pts = set(self.interior)
        for line in self.boundary.values():
            pts.update(line)
        return sorted(pts)

    def __contains__(self, p) -> bool:
        p = (int(p[0]), int(p[1]))
        return p in self._lookup

    @property
    def _lookup(self) -> set[Point]:
        cache = self.__dict__.get("_cache")
        if cache is None:
            cache = set(self.points)
            self.__dict__["_cache"] = cache
        return cache


def discretize(boundary: tuple[BoundaryLine, ...] | list[BoundaryLine]) -> GridDomain:
    vertices = [tuple(ln.p1) for ln in boundary]
    if len(vertices) < 3:
        raise PlaceError("degenerate boundary (zero area)")
    area = polygon_area(vertices)
    if area == 0:
        raise PlaceError("degenerate boundary (zero area)")
    on_edge = {ln.name: segment_points(tuple(ln.p1), tuple(ln.p2)) for ln in boundary}
    edge_set = {p for pts in on_edge.values() for p in pts}
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    gx, gy = np.meshgrid(np.arange(min(xs), max(xs) + 1), np.arange(min(ys), max(ys) + 1), indexing="ij")
    gx, gy = gx.ravel(), gy.ravel()
    mask = inside_polygon(gx.astype(float), gy.astype(float), vertices)
    interior = sorted((int(x), int(y)) for x, y in zip(gx[mask], gy[mask]) if (int(x), int(y)) not in edge_set)
    return GridDomain(vertices, interior, on_edge, area)
