"""Placement of a mass-spring network inside the device boundary."""

from mdlc.place.assign import assign_to_grid
from mdlc.place.crossings import count_crossings, reduce_crossings
from mdlc.place.force import force_layout
from mdlc.place.grid import GridDomain, PlaceError, discretize, segment_points
from mdlc.place.pins import pin_ios, round_half_up
from mdlc.place.pipeline import (
    LAYOUT_FORMAT_VERSION,
    Layout,
    PlaceParams,
    check_layout,
    place_and_route,
    place_seed,
)
from mdlc.place.svg import render_svg

__all__ = [
    "assign_to_grid", "count_crossings", "reduce_crossings", "force_layout",
    "GridDomain", "PlaceError", "discretize", "segment_points", "pin_ios", "round_half_up",
    "LAYOUT_FORMAT_VERSION", "Layout", "PlaceParams", "check_layout", "place_and_route", "place_seed",
    "render_svg",
]
