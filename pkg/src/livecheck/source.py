"""Source text bookkeeping: positions, spans, and line access."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Span:
    """A half-open region of a named source text.

    Lines and columns are 1-based; ``end_col`` points one past the last
    character, so a single-character token at line 1, column 1 has the span
    ``Span(f, 1, 1, 1, 2)``.
    """

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.end_line, self.end_col) < (self.start_line, self.start_col):
            raise ValueError(f"span ends before it starts: {self}")

    def cover(self, other: Span) -> Span:
        """Smallest span containing both ``self`` and ``other``."""
        if self.file != other.file:
            raise ValueError(f"cannot cover spans of {self.file} and {other.file}")
        start = min((self.start_line, self.start_col), (other.start_line, other.start_col))
        end = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return Span(self.file, start[0], start[1], end[0], end[1])

    def contains(self, other: Span) -> bool:
        return (
            self.file == other.file
            and (self.start_line, self.start_col) <= (other.start_line, other.start_col)
            and (other.end_line, other.end_col) <= (self.end_line, self.end_col)
        )

    def sort_key(self) -> tuple:
        return (self.file, self.start_line, self.start_col, self.end_line, self.end_col)

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


class SourceFile:
    """A named source text with line-based access for rendering and checks."""

    def __init__(self, name: str, text: str) -> None:
        self.name = name
        self.text = text
        self.lines = text.split("\n")

    def line(self, number: int) -> str:
        """1-based line lookup; raises IndexError outside the text."""
        if number < 1 or number > len(self.lines):
            raise IndexError(f"{self.name} has no line {number}")
        return self.lines[number - 1]

    def contains(self, span: Span) -> bool:
        """True when the span's positions fall inside this text."""
        if span.file != self.name:
            return False
        try:
            first = self.line(span.start_line)
            last = self.line(span.end_line)
        except IndexError:
            return False
        return 1 <= span.start_col <= len(first) + 1 and 1 <= span.end_col <= len(last) + 1
