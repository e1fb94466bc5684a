"""Edge crossing count and greedy swap-based reduction."""

from __future__ import annotations

import time

import numpy as np

from mdlc.place.grid import Point


def _orient(ax, ay, bx, by, cx, cy):
    return np.sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def _cross_matrix(seg_a: np.ndarray, ids_a: np.ndarray, seg_b: np.ndarray, ids_b: np.ndarray) -> np.ndarray:
    """Boolean matrix of proper intersections between two segment sets.

    Segments are rows ``(x1, y1, x2, y2)``; ``ids`` hold endpoint mass ids so
    that edges sharing a mass never count.  Collinear touching is not a
    crossing.
    """
    a = seg_a[:, None, :]
    b = seg_b[None, :, :]
    o1 = _orient(a[..., 0], a[..., 1], a[..., 2], a[..., 3], b[..., 0], b[..., 1])
    o2 = _orient(a[..., 0], a[..., 1], a[..., 2], a[..., 3], b[..., 2], b[..., 3])
    o3 = _orient(b[..., 0], b[..., 1], b[..., 2], b[..., 3], a[..., 0], a[..., 1])
    o4 = _orient(b[..., 0], b[..., 1], b[..., 2], b[..., 3], a[..., 2], a[..., 3])
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    ia = ids_a[:, None, :]
    ib = ids_b[None, :, :]
    shared = (
        (ia[..., 0] == ib[..., 0]) | (ia[..., 0] == ib[..., 1]) | (ia[..., 1] == ib[..., 0]) | (ia[..., 1] == ib[..., 1])
    )
    return hit & ~shared


def _segments(layout: dict[int, Point], edges) -> tuple[np.ndarray, np.ndarray]:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    seg = np.array([[*layout[i], *layout[j]] for i, j in e], dtype=np.int64).reshape(-1, 4)
    return seg, e


def count_crossings(layout: dict[int, Point], edges) -> int:
    seg, e = _segments(layout, edges)
    if len(seg) < 2:
        return 0
    m = _cross_matrix(seg, e, seg, e)
    return int(np.triu(m, 1).sum())


class CrossingState:
    """Incremental crossing bookkeeping for node swaps."""

    def __init__(self, layout: dict[int, Point], edges):
        self.layout = dict(layout)
        self.edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.incident: dict[int, list[int]] = {}
        for k, (i, j) in enumerate(self.edges):
            self.incident.setdefault(int(i), []).append(k)
            self.incident.setdefault(int(j), []).append(k)
        self.seg = np.array([[*self.layout[i], *self.layout[j]] for i, j in self.edges], dtype=np.int64).reshape(-1, 4)

    def swap_delta(self, a: int, b: int) -> tuple[int, np.ndarray]:
        edge_ids = sorted(set(self.incident.get(a, [])) | set(self.incident.get(b, [])))
        before = self._pairs(edge_ids, self.seg)
        seg2 = self.seg.copy()
        pa, pb = self.layout[a], self.layout[b]
        for k in edge_ids:
            i, j = self.edges[k]
            p = pb if i == a else pa if i == b else self.layout[int(i)]
            q = pb if j == a else pa if j == b else self.layout[int(j)]
            seg2[k] = (*p, *q)
        after = self._pairs(edge_ids, seg2)
        return after - before, seg2

    def _pairs(self, edge_ids: list[int], seg: np.ndarray) -> int:
        if not edge_ids:
            return 0
        sel = np.asarray(edge_ids, dtype=np.int64)
        m = _cross_matrix(seg[sel], self.edges[sel], seg, self.edges)
        # pairs inside the selection appear twice in m; count them once
        inner = m[:, sel]
        return int(m.sum() - np.triu(inner, 1).sum())

    def apply(self, a: int, b: int, seg2: np.ndarray) -> None:
        self.layout[a], self.layout[b] = self.layout[b], self.layout[a]
        self.seg = seg2


def reduce_crossings(
    layout: dict[int, Point],
    edges,
    pinned,
    radius: float = 3.0,
    max_iters: int = 20,
    time_limit: float = 30.0,
    history: list[int] | None = None,
) -> dict[int, Point]:
    """Greedy pass over nearby pairs of unpinned masses, keeping improving swaps.

    Pairs are visited in order of the lower mass id.  Stops after a pass
    without improvement, ``max_iters`` passes or ``time_limit`` seconds.
    ``history`` receives the crossing count after every accepted swap.
    """
    state = CrossingState(layout, edges)
    pinned = set(pinned)
    movable = sorted(m for m in layout if m not in pinned)
    if len(movable) < 2 or len(state.edges) < 2:
        return dict(layout)
    deadline = time.monotonic() + time_limit
    current = count_crossings(layout, edges) if history is not None else 0
    r2 = radius * radius
    for _ in range(max_iters):
        improved = False
        pts = np.array([state.layout[m] for m in movable], dtype=float)
        for ia, a in enumerate(movable):
            d2 = np.sum((pts - np.array(state.layout[a], dtype=float)) ** 2, axis=1)
            for ib in np.nonzero(d2 <= r2)[0]:
                b = movable[int(ib)]
                if b <= a:
                    continue
                delta, seg2 = state.swap_delta(a, b)
                if delta < 0:
                    state.apply(a, b, seg2)
                    pts[ia], pts[ib] = pts[ib].copy(), pts[ia].copy()
                    improved = True
                    if history is not None:
                        current += delta
                        history.append(current)
            if time.monotonic() > deadline:
                return state.layout
        if not improved:
            break
    return state.layout
