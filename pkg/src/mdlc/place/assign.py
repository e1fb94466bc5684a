"""Snap continuous positions to distinct grid points at minimum squared displacement."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import min_weight_full_bipartite_matching

from mdlc.place.grid import PlaceError, Point

DEFAULT_CANDIDATES = 50


def assign_to_grid(
    positions: np.ndarray,
    points: list[Point],
    pins: dict[int, Point] | None = None,
    candidates: int = DEFAULT_CANDIDATES,
) -> dict[int, Point]:
    """Injective mass -> point map; pins are kept and their points reserved.

    Each free mass considers its ``candidates`` nearest free points and the
    resulting sparse problem is solved exactly; if that has no full matching
    the dense problem over all free points is solved instead.
    """
    pins = dict(pins or {})
    n = positions.shape[0]
    taken = set(pins.values())
    free_pts = [p for p in points if p not in taken]
    free = [m for m in range(n) if m not in pins]
    if len(free) > len(free_pts):
        raise PlaceError(f"{len(free)} free masses but only {len(free_pts)} free grid points")
    out = dict(pins)
    if not free:
        return out
    P = np.asarray(free_pts, dtype=float)
    X = positions[free]
    cost = np.sum((X[:, None, :] - P[None, :, :]) ** 2, axis=2)
    rows = cols = None
    if candidates and candidates < len(free_pts):
        kk = candidates
        near = np.argpartition(cost, kk - 1, axis=1)[:, :kk]
        r = np.repeat(np.arange(len(free)), kk)
        c = near.ravel()
        # shift by 1 so that exact hits are not dropped as structural zeros
        w = cost[r, c] + 1.0
        try:
            rows, cols = min_weight_full_bipartite_matching(csr_matrix((w, (r, c)), shape=cost.shape))
        except ValueError:
            rows = cols = None
    if rows is None:
        rows, cols = linear_sum_assignment(cost)
    for r, c in zip(rows, cols):
        out[free[int(r)]] = free_pts[int(c)]
    return out
