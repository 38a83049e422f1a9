"""Lexer for the object language."""

from __future__ import annotations

import string

from .source import Span
from .syntax import KEYWORDS, Token, TokenKind

_IDENT_START = frozenset(string.ascii_letters)
_IDENT_CONT = frozenset(string.ascii_letters + string.digits + "_'")

_PUNCT: dict[str, TokenKind] = {
    "?": TokenKind.QUERY,
    "!": TokenKind.BANG,
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ":": TokenKind.COLON,
    ".": TokenKind.DOT,
}


class LexError(Exception):
    def __init__(self, message: str, span: Span) -> None:
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    """Split ``text`` into tokens, discarding whitespace and ``//`` comments.

    Raises LexError on an illegal character or an unterminated string
    literal. The returned list always ends with an EOF token.
    """
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def span(start_line: int, start_col: int) -> Span:
        return Span(file, start_line, start_col, line, col)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif c == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
        elif c in _IDENT_START:
            sl, sc = line, col
            start = i
            while i < n and text[i] in _IDENT_CONT:
                i += 1
                col += 1
            word = text[start:i]
            kind = KEYWORDS.get(word, TokenKind.IDENT)
            tokens.append(Token(kind, word, span(sl, sc)))
        elif c == '"':
            sl, sc = line, col
            i += 1
            col += 1
            chars: list[str] = []
            while True:
                if i >= n or text[i] == "\n":
                    raise LexError("unterminated string literal", span(sl, sc))
                ch = text[i]
                if ch == "\\" and i + 1 < n and text[i + 1] in '"\\':
                    chars.append(text[i + 1])
                    i += 2
                    col += 2
                elif ch == '"':
                    i += 1
                    col += 1
                    break
                else:
                    chars.append(ch)
                    i += 1
                    col += 1
            tokens.append(Token(TokenKind.STRING, "".join(chars), span(sl, sc)))
        elif c in _PUNCT:
            sl, sc = line, col
            i += 1
            col += 1
            tokens.append(Token(_PUNCT[c], c, span(sl, sc)))
        else:
            raise LexError(
                f"illegal character {c!r}", Span(file, line, col, line, col + 1)
            )

    tokens.append(Token(TokenKind.EOF, "", Span(file, line, col, line, col)))
    return tokens
