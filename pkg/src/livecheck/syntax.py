"""Tokens and the abstract syntax tree of the object language.

Every node carries the span of its full source extent; message labels and
peer names additionally keep their own token spans, which is where
diagnostics anchor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, auto

from .source import Span


class TokenKind(Enum):
    KW_SYSTEM = auto()
    KW_OBJ = auto()
    KW_USING = auto()
    KW_BEHAVIOUR = auto()
    IDENT = auto()
    STRING = auto()
    QUERY = auto()      # ?
    BANG = auto()       # !
    LBRACE = auto()     # {
    RBRACE = auto()     # }
    LPAREN = auto()     # (
    RPAREN = auto()     # )
    COLON = auto()      # :
    DOT = auto()        # .
    EOF = auto()


KEYWORDS: dict[str, TokenKind] = {
    "system": TokenKind.KW_SYSTEM,
    "obj": TokenKind.KW_OBJ,
    "using": TokenKind.KW_USING,
    "behaviour": TokenKind.KW_BEHAVIOUR,
}


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    span: Span

    def __repr__(self) -> str:
        return f"Token({self.kind.name}, {self.text!r}, {self.span})"


class Direction(Enum):
    SEND = "!"
    RECEIVE = "?"

    def flipped(self) -> Direction:
        return Direction.RECEIVE if self is Direction.SEND else Direction.SEND


# ── Payloads ──────────────────────────────────────────────────────

@dataclass(frozen=True, slots=True)
class PrototypeIdent:
    """A prototypical value or binder name, e.g. ``string`` or ``doc``."""
    name: str
    span: Span

    @property
    def display(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class StringLiteral:
    text: str
    span: Span

    @property
    def display(self) -> str:
        return f'"{self.text}"'


Payload = PrototypeIdent | StringLiteral


@dataclass(frozen=True, slots=True)
class Msg:
    """A message label with an optional payload; ``span`` is the label token."""
    label: str
    payload: Payload | None
    span: Span

    @property
    def arity(self) -> int:
        return 0 if self.payload is None else 1


# ── Processes ─────────────────────────────────────────────────────

@dataclass(frozen=True, slots=True)
class Prefix:
    peer: str
    peer_span: Span
    direction: Direction
    msg: Msg
    cont: ProcessAst
    span: Span


@dataclass(frozen=True, slots=True)
class Choice:
    peer: str
    peer_span: Span
    direction: Direction
    branches: tuple[tuple[Msg, ProcessAst], ...]
    span: Span


@dataclass(frozen=True, slots=True)
class BehaviourDef:
    name: str
    name_span: Span
    body: ProcessAst
    cont: ProcessAst
    span: Span


@dataclass(frozen=True, slots=True)
class BehaviourRef:
    name: str
    span: Span


@dataclass(frozen=True, slots=True)
class Terminal:
    span: Span


ProcessAst = Prefix | Choice | BehaviourDef | BehaviourRef | Terminal


# ── Declarations ──────────────────────────────────────────────────

@dataclass(frozen=True, slots=True)
class ObjectDecl:
    name: str
    name_span: Span
    body: ProcessAst
    span: Span


@dataclass(frozen=True, slots=True)
class SystemDecl:
    name: str
    name_span: Span
    refines: str | None
    refines_span: Span | None
    uses: tuple[tuple[str, Span], ...]
    objects: tuple[ObjectDecl, ...]
    span: Span


@dataclass(frozen=True, slots=True)
class ProgramAst:
    systems: tuple[SystemDecl, ...] = field(default_factory=tuple)

    def system(self, name: str) -> SystemDecl | None:
        for decl in self.systems:
            if decl.name == name:
                return decl
        return None

    def merged(self, other: ProgramAst) -> ProgramAst:
        return ProgramAst(self.systems + other.systems)
