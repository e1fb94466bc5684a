"""Full placement flow: grid, pins, two FR stages, assignment, crossing pass."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from mdlc.frontend.ast import MdlDocument
from mdlc.place.assign import DEFAULT_CANDIDATES, assign_to_grid
from mdlc.place.crossings import count_crossings, reduce_crossings
from mdlc.place.force import force_layout
from mdlc.place.grid import GridDomain, PlaceError, Point, discretize
from mdlc.place.pins import pin_ios
from mdlc.techmap.network import MassSpringNetwork

LAYOUT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class PlaceParams:
    seeds: int = 4
    free_iterations: int = 500
    pinned_iterations: int = 300
    candidates: int = DEFAULT_CANDIDATES
    radius: float = 3.0
    crossing_passes: int = 20
    time_limit: float = 30.0


@dataclass
class Layout:
    positions: dict[int, Point]
    pinned: set[int] = field(default_factory=set)
    crossings: int = 0
    seed: int = 0
    params: PlaceParams = PlaceParams()
    history: list[int] = field(default_factory=list)  # crossings at each stage and accepted swap

    def edge_length(self, edges) -> float:
        return sum(math.dist(self.positions[i], self.positions[j]) for i, j in edges)

    def to_dict(self) -> dict:
        return {
            "format_version": LAYOUT_FORMAT_VERSION,
            "masses": [
                {"id": m, "x": p[0], "y": p[1], "pinned": m in self.pinned}
                for m, p in sorted(self.positions.items())
            ],
            "crossings": self.crossings,
            "seed": self.seed,
            "params": asdict(self.params),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> Layout:
        version = data.get("format_version", LAYOUT_FORMAT_VERSION)
        if version != LAYOUT_FORMAT_VERSION:
            raise PlaceError(f"unsupported layout format_version {version}")
        pos = {int(m["id"]): (int(m["x"]), int(m["y"])) for m in data["masses"]}
        pinned = {int(m["id"]) for m in data["masses"] if m.get("pinned")}
        return cls(pos, pinned, int(data.get("crossings", 0)), int(data.get("seed", 0)),
                   PlaceParams(**data.get("params", {})))

    @classmethod
    def from_json(cls, text: str) -> Layout:
        return cls.from_dict(json.loads(text))


def check_layout(positions: dict[int, Point], n: int, domain: GridDomain, pins: dict[int, Point]) -> None:
    """Raise if the layout is not injective, not contained or moved a pin."""
    if sorted(positions) != list(range(n)):
        raise PlaceError("layout does not place every mass exactly once")
    if len(set(positions.values())) != n:
        raise PlaceError("two masses share a grid point")
    for m, p in positions.items():
        if p not in domain:
            raise PlaceError(f"mass {m} at {p} lies outside the boundary")
    for m, p in pins.items():
        if positions[m] != p:
            raise PlaceError(f"pinned mass {m} moved from {p} to {positions[m]}")


def place_seed(
    network: MassSpringNetwork, domain: GridDomain, pins: dict[int, Point], seed: int, params: PlaceParams
) -> Layout:
    n = network.num_masses
    edges = network.edges()
    pos = force_layout(n, edges, domain.vertices, params.free_iterations, seed=seed, area=domain.area)
    pos = force_layout(n, edges, domain.vertices, params.pinned_iterations, seed=seed, pins=pins, init=pos,
                       area=domain.area)
    grid = assign_to_grid(pos, domain.points, pins, params.candidates)
    check_layout(grid, n, domain, pins)
    history = [count_crossings(grid, edges)]
    final = reduce_crossings(grid, edges, pins, params.radius, params.crossing_passes, params.time_limit, history)
    check_layout(final, n, domain, pins)
    return Layout(final, set(pins), history[-1], seed, params, history)


def place_and_route(doc: MdlDocument, network: MassSpringNetwork, params: PlaceParams = PlaceParams()) -> Layout:
    """Best of ``params.seeds`` runs: fewest crossings, then shortest wiring, then lowest seed."""
    domain = discretize(doc.boundary)
    if network.num_masses > len(domain.points):
        raise PlaceError(f"{network.num_masses} masses do not fit in {len(domain.points)} grid points")
    pins = pin_ios(doc, network, domain)
    edges = network.edges()
    best = None
    for seed in range(max(params.seeds, 1)):
        lay = place_seed(network, domain, pins, seed, params)
        key = (lay.crossings, round(lay.edge_length(edges), 9), seed)
        if best is None or key < best[0]:
            best = (key, lay)
    return best[1]
