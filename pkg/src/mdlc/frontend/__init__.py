"""MDL source handling: tokenizer, parser, printer and semantic checks."""

from mdlc.frontend.lexer import LexError, Span, Token, TokenType, tokenize
from mdlc.frontend.parser import ParseError, parse, parse_document
from mdlc.frontend.printer import format_document
from mdlc.frontend.validate import Diagnostic, ValidationReport, validate

__all__ = [
    "Diagnostic",
    "LexError",
    "ParseError",
    "Span",
    "Token",
    "TokenType",
    "ValidationReport",
    "format_document",
    "parse",
    "parse_document",
    "tokenize",
    "validate",
]
