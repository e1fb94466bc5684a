"""Document model produced by the MDL parser.

Spans never take part in equality so that a document re-parsed from its
pretty-printed form compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from mdlc.frontend.lexer import Span

Point = tuple[int, int]


@dataclass(frozen=True)
class BoundaryLine:
    name: str
    p1: Point
    p2: Point
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Location:
    line: str
    fraction: float
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class IoDecl:
    """A sensor or actuator.

    ``locations[k]`` pins bit ``width - 1 - k`` of the port, i.e. locations are
    listed in the same most-significant-first order as the value-map codes.
    A value map of one-bit codes on a multi-location port labels each bit.
    """

    name: str
    kind: str  # "sensor" | "actuator"
    locations: tuple[Location, ...]
    value_map: tuple[tuple[str, str], ...]  # ("0b01", "UP") pairs in source order
    actuator_type: str | None = None
    span: Span | None = field(default=None, compare=False, repr=False)

    @property
    def code_widths(self) -> set[int]:
        return {len(code) - 2 for code, _ in self.value_map}

    @property
    def width(self) -> int:
        if self.locations:
            return len(self.locations)
        widths = self.code_widths
        return widths.pop() if len(widths) == 1 else 0

    @property
    def per_bit_codes(self) -> bool:
        return self.code_widths == {1} and len(self.locations) > 1

    def location_of_bit(self, bit: int) -> Location:
        return self.locations[self.width - 1 - bit]

    def decode(self, value: int) -> str | None:
        for code, label in self.value_map:
            if int(code[2:], 2) == value:
                return label
        return None


# -- behavioral expressions -------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: int
    width: int | None = None  # None for unsized decimal literals
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Ref:
    name: str
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Index:
    name: str
    bit: int
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    op: str  # "!" | "~"
    operand: Expr
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str  # "&&" "||" "&" "|" "^" "==" "!="
    left: Expr
    right: Expr
    span: Span | None = field(default=None, compare=False, repr=False)


Expr = Union[Const, Ref, Index, Unary, Binary]


# -- statements --------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    target: str
    bit: int | None
    expr: Expr
    blocking: bool
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Block:
    body: tuple[Stmt, ...]
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Stmt
    orelse: Stmt | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class CaseItem:
    labels: tuple[Expr, ...]
    body: Stmt


@dataclass(frozen=True)
class Case:
    subject: Expr
    items: tuple[CaseItem, ...]
    default: Stmt | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


Stmt = Union[Assign, Block, If, Case]


# -- module level ------------------------------------------------------------


@dataclass(frozen=True)
class Port:
    direction: str  # "input" | "output"
    name: str
    width: int = 1
    is_reg: bool = False
    init: Const | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class LocalParam:
    name: str
    value: Const
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RegDecl:
    name: str
    width: int = 1
    init: Const | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Process:
    clock: str
    body: Stmt
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class BehaviorAst:
    name: str
    ports: tuple[Port, ...]
    localparams: tuple[LocalParam, ...]
    regs: tuple[RegDecl, ...]
    processes: tuple[Process, ...]
    span: Span | None = field(default=None, compare=False, repr=False)

    def port(self, name: str) -> Port | None:
        return next((p for p in self.ports if p.name == name), None)

    @property
    def process(self) -> Process:
        return self.processes[0]


@dataclass(frozen=True)
class MdlDocument:
    name: str
    boundary: tuple[BoundaryLine, ...]
    ios: tuple[IoDecl, ...]
    behavior: BehaviorAst
    span: Span | None = field(default=None, compare=False, repr=False)

    @property
    def sensors(self) -> tuple[IoDecl, ...]:
        return tuple(io for io in self.ios if io.kind == "sensor")

    @property
    def actuators(self) -> tuple[IoDecl, ...]:
        return tuple(io for io in self.ios if io.kind == "actuator")

    def line(self, name: str) -> BoundaryLine | None:
        return next((ln for ln in self.boundary if ln.name == name), None)

    def io(self, name: str) -> IoDecl | None:
        return next((io for io in self.ios if io.name == name), None)

    @property
    def vertices(self) -> list[Point]:
        return [ln.p1 for ln in self.boundary]
