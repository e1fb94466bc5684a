"""Fix sensor and actuator masses at their declared wall positions."""

from __future__ import annotations

import math

from mdlc.frontend.ast import MdlDocument
from mdlc.place.grid import GridDomain, PlaceError, Point
from mdlc.techmap.network import MassSpringNetwork


def round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


def pin_point(domain: GridDomain, line: str, p1: Point, p2: Point, fraction: float) -> Point:
    """Rounded point along the line, snapped to the nearest lattice point on it."""
    target = (
        round_half_up(p1[0] + fraction * (p2[0] - p1[0])),
        round_half_up(p1[1] + fraction * (p2[1] - p1[1])),
    )
    on_line = domain.boundary[line]
    return min(on_line, key=lambda p: ((p[0] - target[0]) ** 2 + (p[1] - target[1]) ** 2, p))


def pin_ios(doc: MdlDocument, network: MassSpringNetwork, domain: GridDomain) -> dict[int, Point]:
    pins: dict[int, Point] = {}
    owner: dict[Point, str] = {}
    bindings = network.io_masses()
    for io in doc.ios:
        for bit in range(io.width if io.locations else 0):
            mass = bindings.get((io.name, bit))
            if mass is None:
                continue
            loc = io.location_of_bit(bit)
            line = doc.line(loc.line)
            if line is None:
                raise PlaceError(f"{io.name} refers to unknown line {loc.line!r}")
            p = pin_point(domain, line.name, line.p1, line.p2, loc.fraction)
            who = f"{io.name}[{bit}]"
            if p in owner:
                raise PlaceError(f"pins {owner[p]} and {who} both round to {p}")
            owner[p] = who
            pins[mass] = p
    return pins
