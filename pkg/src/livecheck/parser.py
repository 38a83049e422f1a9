"""Recursive-descent parser for the object language.

Grammar:

    program  := system+
    system   := "system" IDENT (":" IDENT)? ("using" IDENT)* object*
    object   := "obj" IDENT process
    process  := IDENT dir msg process            # prefix
              | IDENT dir "{" (msg process)+ "}" # choice
              | "behaviour" IDENT process process
              | IDENT                            # behaviour reference
              | "."                              # terminal
    dir      := "?" | "!"
    msg      := IDENT ("(" payload ")")?
    payload  := IDENT | STRING

Processes are self-delimiting. An identifier followed by ``?`` or ``!``
starts a prefix or choice; a bare identifier in process position is a
behaviour reference.
"""

from __future__ import annotations

from .lexer import tokenize
from .source import Span
from .syntax import (
    BehaviourDef,
    BehaviourRef,
    Choice,
    Direction,
    Msg,
    ObjectDecl,
    Payload,
    Prefix,
    PrototypeIdent,
    ProcessAst,
    ProgramAst,
    StringLiteral,
    SystemDecl,
    Terminal,
    Token,
    TokenKind,
)


class ParseError(Exception):
    def __init__(self, message: str, span: Span, expected: tuple[str, ...] = ()) -> None:
        detail = f"{span}: {message}"
        if expected:
            detail += f" (expected {' or '.join(expected)})"
        super().__init__(detail)
        self.message = message
        self.span = span
        self.expected = expected


_DIR_TOKENS = {TokenKind.QUERY: Direction.RECEIVE, TokenKind.BANG: Direction.SEND}


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    # ── token access ─────────────────────────────────────────────

    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        idx = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[idx]

    def at(self, kind: TokenKind) -> bool:
        return self.current().kind == kind

    def advance(self) -> Token:
        tok = self.current()
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        return tok

    def expect(self, kind: TokenKind, what: str) -> Token:
        if self.at(kind):
            return self.advance()
        tok = self.current()
        found = repr(tok.text) if tok.text else "end of input"
        raise ParseError(f"found {found}", tok.span, expected=(what,))

    def prev_span(self) -> Span:
        return self.tokens[self.pos - 1].span

    # ── grammar ──────────────────────────────────────────────────

    def program(self) -> ProgramAst:
        systems = [self.system()]
        while not self.at(TokenKind.EOF):
            systems.append(self.system())
        return ProgramAst(tuple(systems))

    def system(self) -> SystemDecl:
        kw = self.expect(TokenKind.KW_SYSTEM, "'system'")
        name = self.expect(TokenKind.IDENT, "system name")
        refines = refines_span = None
        if self.at(TokenKind.COLON):
            self.advance()
            tok = self.expect(TokenKind.IDENT, "refined system name")
            refines, refines_span = tok.text, tok.span
        uses: list[tuple[str, Span]] = []
        while self.at(TokenKind.KW_USING):
            self.advance()
            tok = self.expect(TokenKind.IDENT, "used system name")
            uses.append((tok.text, tok.span))
        objects: list[ObjectDecl] = []
        while self.at(TokenKind.KW_OBJ):
            objects.append(self.object_decl())
        return SystemDecl(
            name=name.text,
            name_span=name.span,
            refines=refines,
            refines_span=refines_span,
            uses=tuple(uses),
            objects=tuple(objects),
            span=kw.span.cover(self.prev_span()),
        )

    def object_decl(self) -> ObjectDecl:
        kw = self.expect(TokenKind.KW_OBJ, "'obj'")
        name = self.expect(TokenKind.IDENT, "object name")
        body = self.process()
        return ObjectDecl(name.text, name.span, body, kw.span.cover(self.prev_span()))

    def process(self) -> ProcessAst:
        tok = self.current()
        if tok.kind == TokenKind.DOT:
            self.advance()
            return Terminal(tok.span)
        if tok.kind == TokenKind.KW_BEHAVIOUR:
            self.advance()
            name = self.expect(TokenKind.IDENT, "behaviour name")
            body = self.process()
            cont = self.process()
            return BehaviourDef(
                name.text, name.span, body, cont, tok.span.cover(self.prev_span())
            )
        if tok.kind == TokenKind.IDENT:
            if self.peek().kind in _DIR_TOKENS:
                return self.communication()
            self.advance()
            return BehaviourRef(tok.text, tok.span)
        found = repr(tok.text) if tok.text else "end of input"
        raise ParseError(
            f"found {found}",
            tok.span,
            expected=("a process", "'.'", "'behaviour'", "an identifier"),
        )

    def communication(self) -> ProcessAst:
        peer = self.advance()
        direction = _DIR_TOKENS[self.advance().kind]
        if self.at(TokenKind.LBRACE):
            self.advance()
            branches: list[tuple[Msg, ProcessAst]] = []
            while not self.at(TokenKind.RBRACE):
                msg = self.msg()
                branches.append((msg, self.process()))
            if not branches:
                raise ParseError(
                    "choice has no branches", self.current().span, expected=("a message",)
                )
            self.expect(TokenKind.RBRACE, "'}'")
            return Choice(
                peer.text,
                peer.span,
                direction,
                tuple(branches),
                peer.span.cover(self.prev_span()),
            )
        msg = self.msg()
        cont = self.process()
        return Prefix(
            peer.text, peer.span, direction, msg, cont, peer.span.cover(self.prev_span())
        )

    def msg(self) -> Msg:
        label = self.expect(TokenKind.IDENT, "a message label")
        payload: Payload | None = None
        if self.at(TokenKind.LPAREN):
            self.advance()
            tok = self.current()
            if tok.kind == TokenKind.IDENT:
                self.advance()
                payload = PrototypeIdent(tok.text, tok.span)
            elif tok.kind == TokenKind.STRING:
                self.advance()
                payload = StringLiteral(tok.text, tok.span)
            else:
                found = repr(tok.text) if tok.text else "end of input"
                raise ParseError(
                    f"found {found}", tok.span, expected=("an identifier", "a string")
                )
            self.expect(TokenKind.RPAREN, "')'")
        return Msg(label.text, payload, label.span)


def parse(text: str, file: str = "<input>") -> ProgramAst:
    """Parse ``text`` into a program. Raises LexError or ParseError."""
    return _Parser(tokenize(text, file)).program()
