"""Lexer tests: token kinds, spans, comments, and error positions."""

from __future__ import annotations

import pytest

from livecheck import LexError, tokenize
from livecheck.syntax import TokenKind


def kinds(text):
    return [t.kind for t in tokenize(text)][:-1]  # drop EOF


def test_keyword_and_identifier():
    toks = tokenize("obj PC")
    assert [t.kind for t in toks] == [TokenKind.KW_OBJ, TokenKind.IDENT, TokenKind.EOF]
    assert toks[1].text == "PC"


def test_send_with_string_payload():
    toks = tokenize('PC!submit("my paper")')
    assert [t.kind for t in toks][:-1] == [
        TokenKind.IDENT,
        TokenKind.BANG,
        TokenKind.IDENT,
        TokenKind.LPAREN,
        TokenKind.STRING,
        TokenKind.RPAREN,
    ]
    assert toks[4].text == "my paper"


def test_illegal_character_position():
    with pytest.raises(LexError) as exc:
        tokenize("@")
    assert (exc.value.span.start_line, exc.value.span.start_col) == (1, 1)


def test_all_keywords():
    assert kinds("system obj using behaviour") == [
        TokenKind.KW_SYSTEM,
        TokenKind.KW_OBJ,
        TokenKind.KW_USING,
        TokenKind.KW_BEHAVIOUR,
    ]


def test_punctuation():
    assert kinds(": ? ! { } ( ) .") == [
        TokenKind.COLON,
        TokenKind.QUERY,
        TokenKind.BANG,
        TokenKind.LBRACE,
        TokenKind.RBRACE,
        TokenKind.LPAREN,
        TokenKind.RPAREN,
        TokenKind.DOT,
    ]


def test_prime_is_part_of_identifier():
    toks = tokenize("conf' x_1 A'b")
    assert [t.text for t in toks][:-1] == ["conf'", "x_1", "A'b"]


def test_comments_discarded():
    toks = tokenize("obj // a comment with obj and ! inside\nPC")
    assert [t.text for t in toks][:-1] == ["obj", "PC"]
    assert toks[1].span.start_line == 2


def test_spans_cover_tokens():
    toks = tokenize("ab cd", file="f")
    assert (toks[0].span.start_col, toks[0].span.end_col) == (1, 3)
    assert (toks[1].span.start_col, toks[1].span.end_col) == (4, 6)


def test_string_escapes():
    toks = tokenize(r'"a \"quoted\" bit"')
    assert toks[0].text == 'a "quoted" bit'


def test_unterminated_string():
    with pytest.raises(LexError) as exc:
        tokenize('obj "never ends')
    assert exc.value.span.start_col == 5


def test_multiline_positions():
    toks = tokenize("a\n  b\n    c")
    positions = [(t.span.start_line, t.span.start_col) for t in toks][:-1]
    assert positions == [(1, 1), (2, 3), (3, 5)]
