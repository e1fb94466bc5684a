"""Semantic checks on a parsed MDL document.

Errors make a document unusable for compilation.  Warnings flag legal but
suspicious constructs, currently pins placed exactly on a corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mdlc.frontend.ast import (
    Assign,
    Binary,
    Block,
    Case,
    Expr,
    If,
    Index,
    MdlDocument,
    Ref,
    Stmt,
    Unary,
)
from mdlc.frontend.lexer import Span


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    span: Span | None = None

    def format(self, filename: str = "<input>") -> str:
        line, col = (self.span.line, self.span.col) if self.span else (0, 0)
        return f"{filename}:{line}:{col}: {self.severity}: {self.message}"


@dataclass
class ValidationReport:
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def messages(self) -> list[str]:
        return [d.message for d in self.diagnostics]

    def format(self, filename: str = "<input>") -> str:
        return "\n".join(d.format(filename) for d in self.diagnostics)


def signed_area2(vertices: list[tuple[int, int]]) -> int:
    """Twice the shoelace signed area; negative means clockwise with y up."""
    total = 0
    n = len(vertices)
    for k in range(n):
        x1, y1 = vertices[k]
        x2, y2 = vertices[(k + 1) % n]
        total += x1 * y2 - x2 * y1
    return total


def _check_boundary(doc: MdlDocument, out: list[Diagnostic]) -> None:
    lines = doc.boundary
    if not lines:
        out.append(Diagnostic("error", "boundary is empty", doc.span))
        return
    seen: set[str] = set()
    for ln in lines:
        if ln.name in seen:
            out.append(Diagnostic("error", f"duplicate line name '{ln.name}'", ln.span))
        seen.add(ln.name)
        if ln.p1 == ln.p2:
            out.append(Diagnostic("error", f"line '{ln.name}' has equal endpoints", ln.span))
    closed = True
    for k, ln in enumerate(lines):
        nxt = lines[(k + 1) % len(lines)]
        if ln.p2 != nxt.p1:
            closed = False
            out.append(
                Diagnostic(
                    "error",
                    f"boundary not closed: line '{ln.name}' ends at {ln.p2} "
                    f"but '{nxt.name}' starts at {nxt.p1}",
                    ln.span,
                )
            )
    if not closed or len(lines) < 3:
        if closed:
            out.append(Diagnostic("error", "degenerate boundary (zero area)", lines[0].span))
        return
    area2 = signed_area2(doc.vertices)
    if area2 == 0:
        out.append(Diagnostic("error", "degenerate boundary (zero area)", lines[0].span))
    elif area2 > 0:
        out.append(Diagnostic("error", "boundary not clockwise", lines[0].span))


def _check_ios(doc: MdlDocument, out: list[Diagnostic]) -> None:
    names: set[str] = set()
    pins: dict[tuple[str, float], str] = {}
    for io in doc.ios:
        if io.name in names:
            out.append(Diagnostic("error", f"duplicate {io.kind} '{io.name}'", io.span))
        names.add(io.name)
        if io.actuator_type is not None and io.kind != "actuator":
            out.append(Diagnostic("error", f"'type' is only valid on actuators ('{io.name}')", io.span))
        if not io.locations:
            out.append(Diagnostic("error", f"{io.kind} '{io.name}' has no location", io.span))
        widths = io.code_widths
        if not io.value_map:
            out.append(Diagnostic("error", f"{io.kind} '{io.name}' has an empty value map", io.span))
        elif len(widths) > 1:
            out.append(Diagnostic("error", f"value-map codes of '{io.name}' differ in width", io.span))
        else:
            width = next(iter(widths))
            if width != len(io.locations) and not (width == 1 and io.locations):
                out.append(
                    Diagnostic(
                        "error",
                        f"location count ≠ bit width for '{io.name}' "
                        f"({len(io.locations)} locations, {width}-bit codes)",
                        io.span,
                    )
                )
        codes = [int(code[2:], 2) for code, _ in io.value_map]
        if len(set(codes)) != len(codes):
            out.append(Diagnostic("error", f"duplicate code in value map of '{io.name}'", io.span))
        for loc in io.locations:
            line = doc.line(loc.line)
            if line is None:
                out.append(Diagnostic("error", f"unknown boundary line '{loc.line}'", loc.span))
            if not 0.0 <= loc.fraction <= 1.0:
                out.append(
                    Diagnostic("error", f"location fraction {loc.fraction} outside [0, 1]", loc.span)
                )
            elif loc.fraction in (0.0, 1.0):
                out.append(
                    Diagnostic(
                        "warning",
                        f"location ({loc.line}, {loc.fraction}) sits on a boundary corner",
                        loc.span,
                    )
                )
            key = (loc.line, loc.fraction)
            if key in pins:
                out.append(
                    Diagnostic(
                        "error",
                        f"location ({loc.line}, {loc.fraction}) used by both "
                        f"'{pins[key]}' and '{io.name}'",
                        loc.span,
                    )
                )
            pins.setdefault(key, io.name)


def _expr_names(e: Expr, out: list[tuple[str, int | None, Span | None]]) -> None:
    if isinstance(e, Ref):
        out.append((e.name, None, e.span))
    elif isinstance(e, Index):
        out.append((e.name, e.bit, e.span))
    elif isinstance(e, Unary):
        _expr_names(e.operand, out)
    elif isinstance(e, Binary):
        _expr_names(e.left, out)
        _expr_names(e.right, out)


def _walk(s: Stmt, reads: list, writes: list[Assign]) -> None:
    if isinstance(s, Assign):
        writes.append(s)
        _expr_names(s.expr, reads)
    elif isinstance(s, Block):
        for inner in s.body:
            _walk(inner, reads, writes)
    elif isinstance(s, If):
        _expr_names(s.cond, reads)
        _walk(s.then, reads, writes)
        if s.orelse is not None:
            _walk(s.orelse, reads, writes)
    elif isinstance(s, Case):
        _expr_names(s.subject, reads)
        for item in s.items:
            for lab in item.labels:
                _expr_names(lab, reads)
            _walk(item.body, reads, writes)
        if s.default is not None:
            _walk(s.default, reads, writes)


def _check_behavior(doc: MdlDocument, out: list[Diagnostic]) -> None:
    b = doc.behavior
    widths: dict[str, int] = {}
    writable: set[str] = set()
    for p in b.ports:
        if p.name in widths:
            out.append(Diagnostic("error", f"duplicate port '{p.name}'", p.span))
        widths[p.name] = p.width
        if p.direction == "output":
            writable.add(p.name)
        if p.init is not None and p.init.value != 0:
            out.append(Diagnostic("error", f"nonzero initializer on '{p.name}'", p.span))
        if p.direction == "input" and p.is_reg:
            out.append(Diagnostic("error", f"input port '{p.name}' declared reg", p.span))
    for r in b.regs:
        if r.name in widths:
            out.append(Diagnostic("error", f"duplicate declaration '{r.name}'", r.span))
        widths[r.name] = r.width
        writable.add(r.name)
        if r.init is not None and r.init.value != 0:
            out.append(Diagnostic("error", f"nonzero initializer on '{r.name}'", r.span))
    params: set[str] = set()
    for lp in b.localparams:
        if lp.name in widths or lp.name in params:
            out.append(Diagnostic("error", f"duplicate declaration '{lp.name}'", lp.span))
        params.add(lp.name)

    clocks = [p for p in b.ports if p.name == "clk"]
    if len(clocks) != 1 or clocks[0].direction != "input" or clocks[0].width != 1:
        out.append(Diagnostic("error", "module needs exactly one 1-bit input 'clk'", b.span))
    if len(b.processes) != 1:
        out.append(
            Diagnostic(
                "error",
                f"expected exactly one always @(posedge clk) block, found {len(b.processes)}",
                b.span,
            )
        )
    for proc in b.processes:
        if proc.clock != "clk":
            out.append(Diagnostic("error", f"process clocked by '{proc.clock}', not 'clk'", proc.span))

    for io in doc.ios:
        port = b.port(io.name)
        want = "input" if io.kind == "sensor" else "output"
        if port is None or port.direction != want:
            out.append(
                Diagnostic("error", f"{io.kind} '{io.name}' has no matching {want} port", io.span)
            )
        elif port.width != io.width:
            out.append(
                Diagnostic(
                    "error",
                    f"width of port '{io.name}' ({port.width}) does not match "
                    f"its {io.kind} declaration ({io.width})",
                    io.span,
                )
            )

    for proc in b.processes:
        reads: list = []
        writes: list[Assign] = []
        _walk(proc.body, reads, writes)
        for name, bit, span in reads:
            if name == "clk":
                out.append(Diagnostic("error", "clock 'clk' used as data", span))
            elif name in params:
                if bit is not None:
                    out.append(Diagnostic("error", f"bit-select on localparam '{name}'", span))
            elif name not in widths:
                out.append(Diagnostic("error", f"undeclared identifier '{name}'", span))
            elif bit is not None and not 0 <= bit < widths[name]:
                out.append(Diagnostic("error", f"bit {bit} out of range for '{name}'", span))
        for a in writes:
            if a.target not in writable:
                out.append(Diagnostic("error", f"cannot assign to '{a.target}'", a.span))
            elif a.bit is not None and not 0 <= a.bit < widths[a.target]:
                out.append(Diagnostic("error", f"bit {a.bit} out of range for '{a.target}'", a.span))


def validate(doc: MdlDocument) -> ValidationReport:
    """Run every document-level check and collect diagnostics in source order."""
    out: list[Diagnostic] = []
    _check_boundary(doc, out)
    _check_ios(doc, out)
    _check_behavior(doc, out)
    return ValidationReport(out)
