"""Canonical pretty-printer for MDL documents.

The output re-parses to a document equal to the input.  Binary expressions are
fully parenthesized, so the printed text never depends on operator precedence.
"""

from __future__ import annotations

from mdlc.frontend.ast import (
    Assign,
    Binary,
    Block,
    Case,
    Const,
    Expr,
    If,
    Index,
    IoDecl,
    MdlDocument,
    Port,
    Ref,
    Stmt,
    Unary,
)


def format_fraction(value: float) -> str:
    text = repr(float(value))
    if "e" in text or "E" in text:
        text = f"{value:.20f}".rstrip("0")
        if text.endswith("."):
            text += "0"
    return text


def format_const(c: Const) -> str:
    return str(c.value) if c.width is None else f"{c.width}'d{c.value}"


def format_expr(e: Expr) -> str:
    if isinstance(e, Const):
        return format_const(e)
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Index):
        return f"{e.name}[{e.bit}]"
    if isinstance(e, Unary):
        return f"{e.op}{format_expr(e.operand)}"
    if isinstance(e, Binary):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    raise TypeError(f"not an expression: {e!r}")


def _stmt(s: Stmt, indent: int, out: list[str]) -> None:
    pad = "    " * indent
    if isinstance(s, Assign):
        target = s.target if s.bit is None else f"{s.target}[{s.bit}]"
        op = "=" if s.blocking else "<="
        out.append(f"{pad}{target} {op} {format_expr(s.expr)};")
    elif isinstance(s, Block):
        out.append(f"{pad}begin")
        for inner in s.body:
            _stmt(inner, indent + 1, out)
        out.append(f"{pad}end")
    elif isinstance(s, If):
        out.append(f"{pad}if ({format_expr(s.cond)})")
        then = s.then
        # an else-less nested if would capture our else branch
        if s.orelse is not None and isinstance(then, If) and then.orelse is None:
            out.append(f"{pad}begin")
            _stmt(s.then, indent + 1, out)
            out.append(f"{pad}end")
        else:
            _stmt(then, indent + 1, out)
        if s.orelse is not None:
            out.append(f"{pad}else")
            _stmt(s.orelse, indent + 1, out)
    elif isinstance(s, Case):
        out.append(f"{pad}case ({format_expr(s.subject)})")
        for item in s.items:
            labels = ", ".join(format_expr(lab) for lab in item.labels)
            out.append(f"{pad}{labels}:")
            _stmt(item.body, indent + 1, out)
        if s.default is not None:
            out.append(f"{pad}default:")
            _stmt(s.default, indent + 1, out)
        out.append(f"{pad}endcase")
    else:
        raise TypeError(f"not a statement: {s!r}")


def format_stmt(s: Stmt, indent: int = 0) -> str:
    out: list[str] = []
    _stmt(s, indent, out)
    return "\n".join(out)


def _port(p: Port) -> str:
    parts = [p.direction, "reg" if p.is_reg else "wire"]
    if p.width > 1:
        parts.append(f"[{p.width - 1}:0]")
    parts.append(p.name)
    text = " ".join(parts)
    if p.init is not None:
        text += f" = {format_const(p.init)}"
    return text


def _io(io: IoDecl) -> list[str]:
    fields = []
    if io.actuator_type is not None:
        fields.append(f'type = "{io.actuator_type}"')
    locs = ", ".join(f"({loc.line}, {format_fraction(loc.fraction)})" for loc in io.locations)
    fields.append(f"location = {{{locs}}}")
    values = ", ".join(f'"{code}": "{label}"' for code, label in io.value_map)
    fields.append(f"values = {{{values}}}")
    lines = [f"  {io.kind} {io.name} {{"]
    lines.append(",\n".join(f"      {f}" for f in fields) + " };")
    return lines


def format_document(doc: MdlDocument) -> str:
    out = [f"mechanicalmodule {doc.name}();"]
    if doc.boundary:
        out.append("  boundary {")
        rows = [
            f"      line {ln.name} {{({ln.p1[0]}, {ln.p1[1]}), ({ln.p2[0]}, {ln.p2[1]})}}"
            for ln in doc.boundary
        ]
        out.append(",\n".join(rows) + " };")
    for io in doc.ios:
        out.extend(_io(io))
    b = doc.behavior
    out.append(f"  module {b.name} (")
    out.append(",\n".join(f"      {_port(p)}" for p in b.ports) + ");")
    for lp in b.localparams:
        out.append(f"    localparam {lp.name} = {format_const(lp.value)};")
    for r in b.regs:
        rng = f"[{r.width - 1}:0] " if r.width > 1 else ""
        init = f" = {format_const(r.init)}" if r.init is not None else ""
        out.append(f"    reg {rng}{r.name}{init};")
    for proc in b.processes:
        out.append(f"    always @(posedge {proc.clock})")
        out.append(format_stmt(proc.body, 2))
    out.append("  endmodule")
    out.append("endmechanicalmodule")
    return "\n".join(out) + "\n"
