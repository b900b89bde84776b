from focalite.syntax.parser import parse_expr, parse_formula, parse_type, parse_unit
from focalite.syntax.printer import pretty_print
from focalite.syntax.tokens import Token, TokenKind, tokenize

__all__ = [
    "Token",
    "TokenKind",
    "parse_expr",
    "parse_formula",
    "parse_type",
    "parse_unit",
    "pretty_print",
    "tokenize",
]
