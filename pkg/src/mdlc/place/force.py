"""Fruchterman-Reingold force-directed layout inside a polygon."""

from __future__ import annotations

import math

import numpy as np

from mdlc.place.grid import inside_polygon


def _project_inside(pos: np.ndarray, vertices) -> None:
    """Move points that left the polygon onto the nearest boundary point."""
    out = ~inside_polygon(pos[:, 0], pos[:, 1], vertices)
    if not out.any():
        return
    p = pos[out]
    best = np.full(p.shape[0], np.inf)
    proj = p.copy()
    n = len(vertices)
    for k in range(n):
        a = np.asarray(vertices[k], dtype=float)
        b = np.asarray(vertices[(k + 1) % n], dtype=float)
        ab = b - a
        t = np.clip(((p - a) @ ab) / float(ab @ ab), 0.0, 1.0)
        q = a + t[:, None] * ab
        d = np.sum((p - q) ** 2, axis=1)
        closer = d < best
        best[closer] = d[closer]
        proj[closer] = q[closer]
    pos[out] = proj


def random_positions(n: int, vertices, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples inside the polygon by rejection from its bounding box."""
    v = np.asarray(vertices, dtype=float)
    lo, hi = v.min(axis=0), v.max(axis=0)
    out = np.zeros((0, 2))
    while out.shape[0] < n:
        cand = rng.uniform(lo, hi, size=(max(2 * (n - out.shape[0]), 8), 2))
        cand = cand[inside_polygon(cand[:, 0], cand[:, 1], vertices)]
        out = np.vstack([out, cand])
    return out[:n]


def force_layout(
    n: int,
    edges: list[tuple[int, int]],
    vertices,
    iterations: int,
    seed: int = 0,
    pins: dict[int, tuple[float, float]] | None = None,
    init: np.ndarray | None = None,
    area: float | None = None,
) -> np.ndarray:
    """Continuous positions after ``iterations`` FR steps.

    Springs pull along edges with force d^2/k, every pair repels with k^2/d,
    and the step length is capped by a temperature that cools linearly from
    a tenth of the domain width to zero.  Pinned nodes never move.
    """
    rng = np.random.default_rng(seed)
    pos = random_positions(n, vertices, rng) if init is None else np.array(init, dtype=float)
    fixed = np.zeros(n, dtype=bool)
    for m, p in (pins or {}).items():
        pos[m] = p
        fixed[m] = True
    if n < 2 or iterations <= 0 or fixed.all():
        return pos
    v = np.asarray(vertices, dtype=float)
    if area is None:
        x, y = v[:, 0], v[:, 1]
        area = 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))
    k = math.sqrt(area / n)
    t0 = float((v.max(axis=0) - v.min(axis=0)).max()) / 10.0
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    for it in range(iterations):
        temp = t0 * (1.0 - it / iterations)
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt(np.sum(delta**2, axis=2))
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-3)
        disp = np.sum(delta * (k * k / dist**2)[:, :, None], axis=1)
        if e.size:
            d = pos[e[:, 0]] - pos[e[:, 1]]
            length = np.maximum(np.sqrt(np.sum(d**2, axis=1)), 1e-3)
            pull = d * (length / k)[:, None]
            np.add.at(disp, e[:, 0], -pull)
            np.add.at(disp, e[:, 1], pull)
        size = np.maximum(np.sqrt(np.sum(disp**2, axis=1)), 1e-12)
        step = disp * (np.minimum(size, temp) / size)[:, None]
        step[fixed] = 0.0
        pos += step
        _project_inside(pos, vertices)
    return pos
