from dataclasses import dataclass
from enum import StrEnum

from focalite._diagnostics.errors import Span
from focalite.exceptions import IllegalCharacterError, UnterminatedCommentError


class TokenKind(StrEnum):
    IDENT = "identifier"
    INT = "integer"
    KEYWORD = "keyword"
    SYMBOL = "symbol"
    STEP_LABEL = "step label"
    EOF = "end of input"


KEYWORDS = frozenset(
    {
        "all",
        "assume",
        "by",
        "collection",
        "conclude",
        "definition",
        "else",
        "end",
        "ex",
        "false",
        "final",
        "hypothesis",
        "if",
        "implement",
        "in",
        "inherit",
        "is",
        "let",
        "logical",
        "match",
        "not",
        "of",
        "proof",
        "property",
        "prove",
        "qed",
        "rec",
        "representation",
        "signature",
        "species",
        "step",
        "structural",
        "termination",
        "then",
        "theorem",
        "true",
        "with",
    },
)

# Longest symbols first so that the scan is greedy.
SYMBOLS = (
    "<->",
    ";;",
    "->",
    "/\\",
    "\\/",
    "::",
    "&&",
    "||",
    ";",
    ":",
    ",",
    "(",
    ")",
    "[",
    "]",
    "=",
    "!",
    "|",
    "+",
    "-",
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    span: Span

    def is_keyword(self, word: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.text == word

    def is_symbol(self, symbol: str) -> bool:
        return self.kind is TokenKind.SYMBOL and self.text == symbol

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return "end of input"
        return repr(self.text)


class _Scanner:
    def __init__(self, text: str, file: str) -> None:
        self.text = text
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1

    def span(self) -> Span:
        return Span(file=self.file, line=self.line, col=self.col)

    def peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        return self.text[index] if index < len(self.text) else ""

    def advance(self, count: int = 1) -> str:
        chunk = self.text[self.pos : self.pos + count]
        for char in chunk:
            if char == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += count
        return chunk

    def skip_comment(self) -> None:
        start = self.span()
        depth = 0
        while self.pos < len(self.text):
            if self.text.startswith("(*", self.pos):
                depth += 1
                self.advance(2)
            elif self.text.startswith("*)", self.pos):
                depth -= 1
                self.advance(2)
                if depth == 0:
                    return
            else:
                self.advance()
        raise UnterminatedCommentError(start)

    def step_label_length(self) -> int:
        """Length of a ``<n>k`` label at the cursor, or 0."""
        index = self.pos + 1
        digits = index
        while index < len(self.text) and self.text[index].isdigit():
            index += 1
        if index == digits or index >= len(self.text) or self.text[index] != ">":
            return 0
        index += 1
        tail = index
        while index < len(self.text) and self.text[index].isalnum():
            index += 1
        return 0 if index == tail else index - self.pos


def _scan(text: str, file: str) -> tuple[list[Token], Span]:
    scanner = _Scanner(text, file)
    tokens: list[Token] = []
    while scanner.pos < len(text):
        char = scanner.peek()
        if char.isspace():
            scanner.advance()
            continue
        if text.startswith("(*", scanner.pos):
            scanner.skip_comment()
            continue
        start = scanner.span()
        if char.isalpha() or char == "_":
            length = 1
            while scanner.peek(length).isalnum() or scanner.peek(length) == "_":
                length += 1
            word = scanner.advance(length)
            kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENT
            tokens.append(Token(kind, word, start))
            continue
        if char.isdigit():
            length = 1
            while scanner.peek(length).isdigit():
                length += 1
            tokens.append(Token(TokenKind.INT, scanner.advance(length), start))
            continue
        if char == "<" and (length := scanner.step_label_length()):
            tokens.append(Token(TokenKind.STEP_LABEL, scanner.advance(length), start))
            continue
        symbol = next((s for s in SYMBOLS if text.startswith(s, scanner.pos)), None)
        if symbol is None:
            raise IllegalCharacterError(char, start)
        tokens.append(Token(TokenKind.SYMBOL, scanner.advance(len(symbol)), start))
    return tokens, scanner.span()


def tokenize(text: str, file: str = "<input>") -> tuple[Token, ...]:
    """Split source text into tokens, dropping whitespace and nested ``(* *)`` comments."""
    tokens, _ = _scan(text, file)
    return tuple(tokens)


def token_stream(text: str, file: str = "<input>") -> tuple[Token, ...]:
    """The tokens of ``text`` followed by an end-of-input token."""
    tokens, end = _scan(text, file)
    return (*tokens, Token(TokenKind.EOF, "", end))
