"""Recursive-descent parser for MDL documents.

Grammar (informal EBNF, see ``docs/mdl.ebnf``)::

    document   = "mechanicalmodule" IDENT "(" ")" ";" section* "endmechanicalmodule"
    section    = boundary | io | module
    boundary   = "boundary" "{" line ("," line)* [","] "}" [";"]
    line       = "line" IDENT "{" POINT "," POINT "}"
    io         = ("sensor" | "actuator") IDENT "{" field ("," field)* [","] "}" [";"]
    field      = "location" "=" "{" loc ("," loc)* "}"
               | "values" "=" "{" STRING ":" STRING ("," STRING ":" STRING)* "}"
               | "type" "=" STRING
    loc        = "(" IDENT "," NUMBER ")"

The Verilog part is the subset used by the worked examples: ANSI port lists,
``localparam``, ``reg`` declarations, one ``always @(posedge clk)`` process
with ``begin/end``, ``if/else``, ``case/default`` and both assignment kinds.
Delimiters between sections are accepted leniently.
"""

from __future__ import annotations

from mdlc.frontend.ast import (
    Assign,
    BehaviorAst,
    Binary,
    Block,
    BoundaryLine,
    Case,
    CaseItem,
    Const,
    Expr,
    If,
    Index,
    IoDecl,
    LocalParam,
    Location,
    MdlDocument,
    Port,
    Process,
    Ref,
    RegDecl,
    Stmt,
    Unary,
)
from mdlc.frontend.lexer import Span, Token, TokenType, tokenize


class ParseError(Exception):
    def __init__(self, message: str, span: Span):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


# binary operator precedence, loosest first
_PRECEDENCE = [("||",), ("&&",), ("|",), ("^",), ("&",), ("==", "!=")]


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- navigation -------------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        tok = self.cur
        return tok.type not in (TokenType.STRING, TokenType.EOF) and tok.text == text

    def advance(self) -> Token:
        tok = self.cur
        if tok.type is not TokenType.EOF:
            self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.cur
        got = tok.text if tok.type is not TokenType.EOF else "end of input"
        return ParseError(f"{message} (got {got!r})", tok.span)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect_type(self, type_: TokenType, what: str) -> Token:
        if self.cur.type is not type_:
            raise self.error(f"expected {what}")
        return self.advance()

    def ident(self) -> Token:
        return self.expect_type(TokenType.IDENT, "identifier")

    # -- document ---------------------------------------------------------

    def document(self) -> MdlDocument:
        start = self.expect("mechanicalmodule")
        name = self.ident().text
        if self.accept("("):
            self.expect(")")
        self.accept(";")
        boundary: tuple[BoundaryLine, ...] | None = None
        ios: list[IoDecl] = []
        behavior: BehaviorAst | None = None
        while not self.at("endmechanicalmodule"):
            tok = self.cur
            if tok.type is TokenType.EOF:
                raise self.error("expected 'endmechanicalmodule'")
            if self.accept(";"):
                continue
            if tok.text == "boundary":
                if boundary is not None:
                    raise ParseError("duplicate section 'boundary'", tok.span)
                boundary = self.boundary()
            elif tok.text in ("sensor", "actuator"):
                ios.append(self.io_decl())
            elif tok.text == "module":
                if behavior is not None:
                    raise ParseError("duplicate section 'module'", tok.span)
                behavior = self.module()
            else:
                raise self.error("expected 'boundary', 'sensor', 'actuator' or 'module'")
        end = self.expect("endmechanicalmodule")
        self.accept(";")
        if self.cur.type is not TokenType.EOF:
            raise self.error("unexpected text after 'endmechanicalmodule'")
        if behavior is None:
            raise ParseError("missing behavior module", end.span)
        return MdlDocument(name, boundary or (), tuple(ios), behavior, start.span)

    def boundary(self) -> tuple[BoundaryLine, ...]:
        self.expect("boundary")
        self.expect("{")
        lines = []
        while not self.at("}"):
            tok = self.expect("line")
            name = self.ident().text
            self.expect("{")
            p1 = self.expect_type(TokenType.POINT, "integer point (x, y)").value
            self.expect(",")
            p2 = self.expect_type(TokenType.POINT, "integer point (x, y)").value
            self.expect("}")
            lines.append(BoundaryLine(name, p1, p2, tok.span))
            if not self.accept(","):
                break
        self.expect("}")
        self.accept(";")
        return tuple(lines)

    def io_decl(self) -> IoDecl:
        kind_tok = self.advance()
        name = self.ident().text
        self.expect("{")
        locations: tuple[Location, ...] = ()
        values: tuple[tuple[str, str], ...] = ()
        actuator_type = None
        while not self.at("}"):
            field_tok = self.cur
            if self.accept("location"):
                self.expect("=")
                locations = self.locations()
            elif self.accept("values"):
                self.expect("=")
                values = self.value_map()
            elif self.accept("type"):
                self.expect("=")
                actuator_type = self.expect_type(TokenType.STRING, "string").value
            else:
                raise self.error("expected 'location', 'values' or 'type'", field_tok)
            if not self.accept(","):
                break
        self.expect("}")
        self.accept(";")
        return IoDecl(name, kind_tok.text, locations, values, actuator_type, kind_tok.span)

    def locations(self) -> tuple[Location, ...]:
        self.expect("{")
        locs = []
        while not self.at("}"):
            tok = self.expect("(")
            line = self.ident().text
            self.expect(",")
            frac = self.expect_type(TokenType.NUMBER, "fraction").value
            self.expect(")")
            locs.append(Location(line, float(frac), tok.span))
            if not self.accept(","):
                break
        self.expect("}")
        return tuple(locs)

    def value_map(self) -> tuple[tuple[str, str], ...]:
        self.expect("{")
        pairs = []
        while not self.at("}"):
            code_tok = self.expect_type(TokenType.STRING, "binary code string")
            code = code_tok.value
            if not (code.startswith("0b") and len(code) > 2 and set(code[2:]) <= {"0", "1"}):
                raise ParseError(f"malformed binary code {code!r}", code_tok.span)
            self.expect(":")
            label = self.expect_type(TokenType.STRING, "label string").value
            pairs.append((code, label))
            if not self.accept(","):
                break
        self.expect("}")
        return tuple(pairs)

    # -- verilog module ---------------------------------------------------

    def module(self) -> BehaviorAst:
        start = self.expect("module")
        name = self.ident().text
        ports: list[Port] = []
        if self.accept("("):
            direction, is_reg, width = None, False, 1
            while not self.at(")"):
                tok = self.cur
                if self.at("input") or self.at("output"):
                    direction = self.advance().text
                    is_reg = False
                    width = 1
                    if self.accept("wire"):
                        pass
                    elif self.accept("reg"):
                        is_reg = True
                    if self.at("["):
                        width = self.range_width()
                elif direction is None:
                    raise self.error("expected 'input' or 'output'")
                pname = self.ident().text
                init = None
                if self.accept("="):
                    init = self.constant()
                ports.append(Port(direction, pname, width, is_reg, init, tok.span))
                if not self.accept(","):
                    break
            self.expect(")")
        self.expect(";")
        localparams: list[LocalParam] = []
        regs: list[RegDecl] = []
        processes: list[Process] = []
        while not self.at("endmodule"):
            tok = self.cur
            if tok.type is TokenType.EOF:
                raise self.error("expected 'endmodule'")
            if self.accept(";"):
                continue
            if self.accept("localparam"):
                while True:
                    ptok = self.ident()
                    self.expect("=")
                    localparams.append(LocalParam(ptok.text, self.constant(), ptok.span))
                    if not self.accept(","):
                        break
                self.expect(";")
            elif self.accept("reg"):
                width = self.range_width() if self.at("[") else 1
                while True:
                    rtok = self.ident()
                    init = self.constant() if self.accept("=") else None
                    regs.append(RegDecl(rtok.text, width, init, rtok.span))
                    if not self.accept(","):
                        break
                self.expect(";")
            elif self.accept("always"):
                self.expect("@")
                self.expect("(")
                self.expect("posedge")
                clock = self.ident().text
                self.expect(")")
                processes.append(Process(clock, self.statement(), tok.span))
            else:
                raise self.error("expected 'localparam', 'reg' or 'always'")
        self.expect("endmodule")
        return BehaviorAst(
            name, tuple(ports), tuple(localparams), tuple(regs), tuple(processes), start.span
        )

    def range_width(self) -> int:
        self.expect("[")
        msb = self.expect_type(TokenType.NUMBER, "integer").value
        self.expect(":")
        lsb_tok = self.expect_type(TokenType.NUMBER, "integer")
        self.expect("]")
        if lsb_tok.value != 0 or not isinstance(msb, int) or msb < 0:
            raise ParseError("only [msb:0] ranges are supported", lsb_tok.span)
        return msb + 1

    def constant(self) -> Const:
        tok = self.cur
        if tok.type is TokenType.SIZED:
            self.advance()
            width, value = tok.value
            return Const(value, width, tok.span)
        if tok.type is TokenType.NUMBER and isinstance(tok.value, int):
            self.advance()
            return Const(tok.value, None, tok.span)
        raise self.error("expected constant")

    # -- statements -------------------------------------------------------

    def statement(self) -> Stmt:
        tok = self.cur
        if self.accept("begin"):
            body = []
            while not self.at("end"):
                if self.cur.type is TokenType.EOF:
                    raise self.error("expected 'end'")
                body.append(self.statement())
            self.expect("end")
            # a lone statement needs no block; keeps printing canonical
            if len(body) == 1:
                return body[0]
            return Block(tuple(body), tok.span)
        if self.accept(";"):
            return Block((), tok.span)
        if self.accept("if"):
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            then = self.statement()
            orelse = self.statement() if self.accept("else") else None
            return If(cond, then, orelse, tok.span)
        if self.accept("case"):
            self.expect("(")
            subject = self.expression()
            self.expect(")")
            items: list[CaseItem] = []
            default = None
            while not self.at("endcase"):
                if self.cur.type is TokenType.EOF:
                    raise self.error("expected 'endcase'")
                if self.accept("default"):
                    self.accept(":")
                    if default is not None:
                        raise ParseError("duplicate default", tok.span)
                    default = self.statement()
                    continue
                labels = [self.expression()]
                while self.accept(","):
                    labels.append(self.expression())
                self.expect(":")
                items.append(CaseItem(tuple(labels), self.statement()))
            self.expect("endcase")
            return Case(subject, tuple(items), default, tok.span)
        if tok.type is TokenType.IDENT:
            self.advance()
            bit = None
            if self.accept("["):
                bit = self.expect_type(TokenType.NUMBER, "bit index").value
                self.expect("]")
            if self.accept("="):
                blocking = True
            elif self.accept("<="):
                blocking = False
            else:
                raise self.error("expected '=' or '<='")
            expr = self.expression()
            self.expect(";")
            return Assign(tok.text, bit, expr, blocking, tok.span)
        raise self.error("expected statement")

    # -- expressions ------------------------------------------------------

    def expression(self, level: int = 0) -> Expr:
        if level == len(_PRECEDENCE):
            return self.unary()
        left = self.expression(level + 1)
        while self.cur.type is TokenType.OP and self.cur.text in _PRECEDENCE[level]:
            op = self.advance()
            right = self.expression(level + 1)
            left = Binary(op.text, left, right, op.span)
        return left

    def unary(self) -> Expr:
        tok = self.cur
        if tok.type is TokenType.OP and tok.text in ("!", "~"):
            self.advance()
            return Unary(tok.text, self.unary(), tok.span)
        return self.primary()

    def primary(self) -> Expr:
        tok = self.cur
        if self.accept("("):
            inner = self.expression()
            self.expect(")")
            return inner
        if tok.type is TokenType.IDENT:
            self.advance()
            if self.accept("["):
                bit = self.expect_type(TokenType.NUMBER, "bit index").value
                self.expect("]")
                return Index(tok.text, bit, tok.span)
            return Ref(tok.text, tok.span)
        if tok.type in (TokenType.SIZED, TokenType.NUMBER):
            return self.constant()
        raise self.error("expected expression")


def parse_document(tokens: list[Token]) -> MdlDocument:
    return Parser(tokens).document()


def parse(source: str) -> MdlDocument:
    """Tokenize and parse MDL source text."""
    return parse_document(tokenize(source))
