"""Tokenizer for MDL source files.

The lexer is context free.  Integer coordinate pairs such as ``(0, 39)`` are
emitted as a single ``POINT`` token because they only ever appear in boundary
line declarations; every other parenthesis is plain punctuation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum, auto


class TokenType(Enum):
    KEYWORD = auto()
    IDENT = auto()
    NUMBER = auto()  # plain decimal or fraction: 39, 0.5
    SIZED = auto()  # Verilog sized literal: 2'd0, 1'b1
    STRING = auto()
    POINT = auto()  # (x, y) with integer coordinates
    OP = auto()
    PUNCT = auto()
    EOF = auto()


MDL_KEYWORDS = frozenset(
    {
        "mechanicalmodule",
        "endmechanicalmodule",
        "boundary",
        "line",
        "sensor",
        "actuator",
        "location",
        "values",
        "type",
    }
)

VERILOG_KEYWORDS = frozenset(
    {
        "module",
        "endmodule",
        "input",
        "output",
        "wire",
        "reg",
        "localparam",
        "always",
        "posedge",
        "begin",
        "end",
        "if",
        "else",
        "case",
        "endcase",
        "default",
    }
)

KEYWORDS = MDL_KEYWORDS | VERILOG_KEYWORDS


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Token:
    type: TokenType
    text: str
    span: Span
    value: object = None

    def is_(self, type_: TokenType, text: str | None = None) -> bool:
        return self.type is type_ and (text is None or self.text == text)


class LexError(Exception):
    def __init__(self, message: str, span: Span):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<point>\(\s*-?\d+\s*,\s*-?\d+\s*\))
  | (?P<sized>\d+\s*'\s*[sS]?[bBdDhHoO][0-9a-fA-F_]+)
  | (?P<number>\d+\.\d*|\.\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_$]*)
  | (?P<string>")
  | (?P<op><=|==|!=|&&|\|\||[=!~&|^<>])
  | (?P<punct>[{}()\[\];:,.@])
    """,
    re.VERBOSE,
)

_BASES = {"b": 2, "o": 8, "d": 10, "h": 16}


def parse_sized_literal(text: str) -> tuple[int, int]:
    """Return ``(width, value)`` for a literal such as ``4'b1001``."""
    size, rest = text.replace(" ", "").split("'", 1)
    if rest[0] in "sS":
        rest = rest[1:]
    base = _BASES[rest[0].lower()]
    digits = rest[1:].replace("_", "")
    return int(size), int(digits, base)


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens, ending with a single EOF token.

    ``//`` comments and whitespace are dropped.  Raises :class:`LexError` on an
    unterminated string or a character outside the grammar.
    """
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            raise LexError(f"illegal character {source[pos]!r}", span)
        kind = m.lastgroup
        text = m.group()
        if kind == "string":
            end = source.find('"', pos + 1)
            newline = source.find("\n", pos + 1)
            if end < 0 or (0 <= newline < end):
                raise LexError("unterminated string", span)
            text = source[pos : end + 1]
            tokens.append(Token(TokenType.STRING, text, span, text[1:-1]))
            pos = end + 1
            continue
        if kind == "point":
            x, y = (int(v) for v in text[1:-1].split(","))
            tokens.append(Token(TokenType.POINT, text, span, (x, y)))
        elif kind == "sized":
            tokens.append(Token(TokenType.SIZED, text, span, parse_sized_literal(text)))
        elif kind == "number":
            value = float(text) if "." in text else int(text)
            tokens.append(Token(TokenType.NUMBER, text, span, value))
        elif kind == "ident":
            ttype = TokenType.KEYWORD if text in KEYWORDS else TokenType.IDENT
            tokens.append(Token(ttype, text, span, text))
        elif kind == "op":
            tokens.append(Token(TokenType.OP, text, span, text))
        elif kind == "punct":
            tokens.append(Token(TokenType.PUNCT, text, span, text))
        # whitespace, comments and points may span newlines
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token(TokenType.EOF, "", Span(line, pos - line_start + 1)))
    return tokens
