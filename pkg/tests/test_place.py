import itertools
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdlc.frontend.ast import BoundaryLine
from mdlc.place import (
    Layout,
    PlaceError,
    PlaceParams,
    assign_to_grid,
    check_layout,
    count_crossings,
    discretize,
    force_layout,
    pin_ios,
    place_and_route,
    reduce_crossings,
    render_svg,
    round_half_up,
    segment_points,
)
from mdlc.place.pins import pin_point
from mdlc.techmap import MassSpringNetwork, Phase, cell_buf


def lines_of(vertices):
    return [BoundaryLine(f"l{k}", vertices[k], vertices[(k + 1) % len(vertices)]) for k in range(len(vertices))]


def pick_count(vertices):
    """Lattice points in a closed simple polygon via Pick's theorem."""
    n = len(vertices)
    twice_area = abs(sum(
        vertices[k][0] * vertices[(k + 1) % n][1] - vertices[(k + 1) % n][0] * vertices[k][1] for k in range(n)
    ))
    b = sum(
        math.gcd(abs(vertices[(k + 1) % n][0] - vertices[k][0]), abs(vertices[(k + 1) % n][1] - vertices[k][1]))
        for k in range(n)
    )
    # A = I + B/2 - 1, total = I + B
    return (twice_area - b + 2) // 2 + b


# -- grid ------------------------------------------------------------------


def test_maze_square_has_1600_points(maze_doc):
    dom = discretize(maze_doc.boundary)
    assert len(dom.points) == 1600
    assert dom.area == 39 * 39


def test_lock_pentagon_matches_pick(lock_doc):
    dom = discretize(lock_doc.boundary)
    assert len(dom.points) == pick_count(lock_doc.vertices)


def convex_polygon(points):
    pts = sorted(set(points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull[::-1]  # clockwise


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-15, 15), st.integers(-15, 15)), min_size=3, max_size=12))
def test_grid_count_matches_pick(points):
    hull = convex_polygon(points)
    if len(hull) < 3:
        return
    dom = discretize(lines_of(hull))
    assert len(dom.points) == pick_count(hull)


def test_degenerate_boundary():
    with pytest.raises(PlaceError, match="zero area"):
        discretize(lines_of([(0, 0), (2, 2), (4, 4)]))


@pytest.mark.parametrize("p1, p2, n", [((0, 0), (0, 39), 40), ((0, 35), (20, 49), 3), ((3, 3), (3, 3), 1)])
def test_segment_points(p1, p2, n):
    pts = segment_points(p1, p2)
    assert len(pts) == n and pts[0] == p1 and pts[-1] == p2


def test_round_half_up():
    assert [round_half_up(v) for v in (2.5, 3.5, -2.5, 2.49)] == [3, 4, -2, 2]


def test_pin_examples(maze_doc, maze_net):
    dom = discretize(maze_doc.boundary)
    assert pin_point(dom, "leftline", (0, 0), (0, 39), 0.5) == (0, 20)
    assert pin_point(dom, "frontline", (0, 39), (39, 39), 0.5) == (20, 39)
    pins = pin_ios(maze_doc, maze_net, dom)
    assert pins[maze_net.sensors[("SENSOR_BACK", 0)]] == (20, 0)
    assert pins[maze_net.actuators[("MOTION_DIRECTION", 1)]] == (35, 0)
    assert pins[maze_net.actuators[("MOTION_DIRECTION", 0)]] == (39, 0)


def test_pin_snaps_to_lattice(lock_doc):
    dom = discretize(lock_doc.boundary)
    # the slanted edge only carries lattice points every 10 units along x
    assert pin_point(dom, "frontline1", (0, 35), (20, 49), 0.3) == (10, 42)


def test_pin_collision(maze_doc, maze_net):
    import dataclasses

    from mdlc.frontend.ast import Location

    act = maze_doc.io("MOTION_DIRECTION")
    moved = dataclasses.replace(act, locations=(Location("backline", 0.11), Location("backline", 0.1)))
    doc = dataclasses.replace(maze_doc, ios=maze_doc.sensors + (moved,))
    with pytest.raises(PlaceError, match="both round to"):
        pin_ios(doc, maze_net, discretize(doc.boundary))


# -- force layout ----------------------------------------------------------

SQUARE = [(0, 100), (100, 100), (100, 0), (0, 0)]


def test_two_nodes_settle_at_k():
    pos = force_layout(2, [(0, 1)], SQUARE, 800, seed=1, area=2 * 30.0**2)
    assert np.linalg.norm(pos[0] - pos[1]) == pytest.approx(30.0, rel=0.02)


def test_layout_stays_inside_and_respects_pins():
    pins = {0: (0.0, 50.0)}
    pos = force_layout(30, [(k, k + 1) for k in range(29)], SQUARE, 100, seed=3, pins=pins)
    assert tuple(pos[0]) == (0.0, 50.0)
    assert np.all(pos >= -1e-9) and np.all(pos <= 100 + 1e-9)


def test_layout_deterministic():
    a = force_layout(10, [(0, 1)], SQUARE, 50, seed=7)
    b = force_layout(10, [(0, 1)], SQUARE, 50, seed=7)
    np.testing.assert_array_equal(a, b)


# -- assignment ------------------------------------------------------------


def brute_force(positions, points, free):
    pts = np.asarray(points, dtype=float)
    X = positions[free]
    cost = np.sum((X[:, None, :] - pts[None, :, :]) ** 2, axis=2)
    perms = np.array(list(itertools.permutations(range(len(points)), len(free))))
    return cost[np.arange(len(free))[None, :], perms].sum(axis=1).min()


def assignment_cost(assign, positions, free):
    return sum((positions[m][0] - assign[m][0]) ** 2 + (positions[m][1] - assign[m][1]) ** 2 for m in free)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), n_free=st.integers(1, 8), n_pins=st.integers(0, 2))
def test_assignment_matches_exhaustive(seed, n_free, n_pins):
    rng = np.random.default_rng(seed)
    points = [(x, y) for x in range(3) for y in range(3)] + [(3, 0), (3, 1)]
    pin_pts = [points[k] for k in rng.choice(len(points), n_pins, replace=False)]
    pins = {n_free + k: p for k, p in enumerate(pin_pts)}
    n = n_free + n_pins
    positions = rng.uniform(-0.5, 3.5, size=(n, 2))
    free_pts = [p for p in points if p not in pin_pts]
    if n_free > len(free_pts):
        return
    free = list(range(n_free))
    best = brute_force(positions, free_pts, free)
    for candidates in (50, 3):
        got = assign_to_grid(positions, points, pins, candidates)
        assert all(got[m] == p for m, p in pins.items())
        assert len(set(got.values())) == n
        cost = assignment_cost(got, positions, free)
        if candidates >= len(free_pts):
            assert cost == pytest.approx(best)
        else:
            # pruned to the nearest points: feasible, never better than optimal
            assert cost >= best - 1e-9


def test_assignment_too_many_masses():
    with pytest.raises(PlaceError):
        assign_to_grid(np.zeros((3, 2)), [(0, 0), (1, 0)])


# -- crossings -------------------------------------------------------------


def proper_cross(p1, p2, p3, p4):
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 0) - (v < 0)

    return orient(p1, p2, p3) * orient(p1, p2, p4) < 0 and orient(p3, p4, p1) * orient(p3, p4, p2) < 0


def oracle_crossings(layout, edges):
    total = 0
    for (a, b), (c, d) in itertools.combinations(edges, 2):
        if len({a, b, c, d}) < 4:
            continue
        total += proper_cross(layout[a], layout[b], layout[c], layout[d])
    return total


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 100_000), n=st.integers(2, 12))
def test_crossings_match_pairwise_oracle(seed, n):
    rng = np.random.default_rng(seed)
    pts = rng.choice(49, n, replace=False)
    layout = {k: (int(p % 7), int(p // 7)) for k, p in enumerate(pts)}
    edges = sorted({tuple(sorted(int(v) for v in rng.choice(n, 2, replace=False))) for _ in range(2 * n)})
    assert count_crossings(layout, edges) == oracle_crossings(layout, edges)


def test_shared_endpoint_and_collinear_not_counted():
    layout = {0: (0, 0), 1: (2, 2), 2: (0, 2), 3: (4, 4), 4: (1, 1), 5: (3, 3)}
    assert count_crossings(layout, [(0, 1), (0, 2)]) == 0
    assert count_crossings(layout, [(0, 1), (4, 5)]) == 0
    assert count_crossings(layout, [(0, 1), (2, 4)]) == 0  # touching at (1, 1)


def k4_layout():
    # K4 on a square crosses once; a fifth mass sits in the middle
    layout = {0: (0, 0), 1: (2, 0), 2: (2, 2), 3: (0, 2), 4: (1, 1)}
    edges = list(itertools.combinations(range(4), 2))
    return layout, edges


def test_k4_reduction_reaches_planar():
    layout, edges = k4_layout()
    assert count_crossings(layout, edges) == 1
    history = [1]
    out = reduce_crossings(layout, edges, pinned=set(), history=history)
    assert count_crossings(out, edges) == 0
    assert history[-1] == 0
    assert sorted(out.values()) == sorted(layout.values())


def test_pinned_masses_never_swap():
    layout, edges = k4_layout()
    out = reduce_crossings(layout, edges, pinned={0, 1, 2, 3, 4})
    assert out == layout


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_reduction_history_monotone(seed):
    rng = np.random.default_rng(seed)
    n = 14
    pts = rng.choice(64, n, replace=False)
    layout = {k: (int(p % 8), int(p // 8)) for k, p in enumerate(pts)}
    edges = sorted({tuple(sorted(int(v) for v in rng.choice(n, 2, replace=False))) for _ in range(25)})
    pinned = {0, 1}
    history = [count_crossings(layout, edges)]
    out = reduce_crossings(layout, edges, pinned, history=history)
    assert all(b <= a for a, b in zip(history, history[1:]))
    assert history[-1] == count_crossings(out, edges) == oracle_crossings(out, edges)
    assert all(out[m] == layout[m] for m in pinned)


# -- full flow -------------------------------------------------------------


@pytest.mark.parametrize("name", ["maze", "lock"])
def test_place_and_route_properties(name, request):
    doc = request.getfixturevalue(f"{name}_doc")
    net = request.getfixturevalue(f"{name}_net")
    lay = request.getfixturevalue(f"{name}_layout")
    dom = discretize(doc.boundary)
    pins = pin_ios(doc, net, dom)
    check_layout(lay.positions, net.num_masses, dom, pins)
    assert lay.pinned == set(pins)
    assert all(b <= a for a, b in zip(lay.history, lay.history[1:]))
    assert lay.crossings == lay.history[-1] == count_crossings(lay.positions, net.edges())


def test_check_layout_detects_violations(maze_doc):
    dom = discretize(maze_doc.boundary)
    with pytest.raises(PlaceError, match="share"):
        check_layout({0: (1, 1), 1: (1, 1)}, 2, dom, {})
    with pytest.raises(PlaceError, match="outside"):
        check_layout({0: (1, 1), 1: (50, 1)}, 2, dom, {})
    with pytest.raises(PlaceError, match="moved"):
        check_layout({0: (1, 1), 1: (2, 1)}, 2, dom, {0: (0, 20)})
    with pytest.raises(PlaceError, match="exactly once"):
        check_layout({0: (1, 1)}, 2, dom, {})


def test_too_many_masses():
    net = MassSpringNetwork()
    a = net.add_mass(Phase.IN)
    for _ in range(10):
        a = cell_buf(net, a)
    from helpers import FRAME
    from mdlc.frontend import parse

    doc = parse(FRAME.format(ports="", decls="", body="").replace("9", "2"))
    with pytest.raises(PlaceError, match="do not fit"):
        place_and_route(doc, net, PlaceParams(seeds=1))


def test_layout_json_round_trip(maze_layout):
    again = Layout.from_json(maze_layout.to_json())
    assert again.positions == maze_layout.positions
    assert again.pinned == maze_layout.pinned
    assert (again.crossings, again.seed, again.params) == (maze_layout.crossings, maze_layout.seed, maze_layout.params)


def test_layout_version_checked(maze_layout):
    data = maze_layout.to_dict()
    data["format_version"] = 7
    with pytest.raises(PlaceError, match="format_version"):
        Layout.from_dict(data)


def test_small_flow_is_deterministic(maze_doc):
    net = MassSpringNetwork()
    a = net.add_mass(Phase.IN)
    for _ in range(6):
        a = cell_buf(net, a)
    params = PlaceParams(seeds=2, free_iterations=40, pinned_iterations=20)
    one = place_and_route(maze_doc, net, params)
    two = place_and_route(maze_doc, net, params)
    assert one.positions == two.positions and one.seed == two.seed


def test_svg_render(lock_net, lock_layout, lock_doc):
    text = render_svg(lock_net, lock_layout, lock_doc.vertices)
    root = ET.fromstring(text)
    ns = "{http://www.w3.org/2000/svg}"
    assert len(root.findall(f"{ns}circle")) == lock_net.num_masses
    assert len(root.findall(f"{ns}polygon")) == 1
