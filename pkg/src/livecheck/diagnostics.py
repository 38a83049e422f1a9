"""The shared error model: kinds, polarity, traces, links, and rendering.

Text and JSON rendering are both deterministic: diagnostics are ordered by
(file, span, kind) and JSON is emitted with a fixed key order so identical
inputs produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Mapping

from .source import SourceFile, Span


class DiagnosticKind(str, Enum):
    STATIC_ERROR = "StaticError"
    UNSPECIFIED_RECEPTION = "UnspecifiedReception"
    DEADLOCK = "Deadlock"
    ORPHAN_MESSAGE = "OrphanMessage"
    BOUND_EXCEEDED = "BoundExceeded"
    UNPERMITTED_SEND = "UnpermittedSend"
    MISSING_RECEIVE = "MissingReceive"
    EXTRA_REQUIREMENT = "ExtraRequirement"
    DIRECTION_MISMATCH = "DirectionMismatch"
    PEER_MISMATCH = "PeerMismatch"


class Polarity(str, Enum):
    RED = "red"
    BLUE = "blue"
    WARNING = "warning"


@dataclass(frozen=True, slots=True)
class TraceEvent:
    """One step of an execution trace: ``A!ping`` or ``PC?submit``."""

    actor: str
    action: str  # "send" | "receive"
    peer: str
    label: str

    def __str__(self) -> str:
        mark = "!" if self.action == "send" else "?"
        return f"{self.actor}{mark}{self.label}"


@dataclass(frozen=True, slots=True)
class Note:
    """A secondary source location attached to a diagnostic (not itself a
    diagnostic; rendered as a ``see also`` line)."""

    file: str
    span: Span
    message: str


@dataclass(frozen=True, slots=True)
class Diagnostic:
    id: str
    kind: DiagnosticKind
    polarity: Polarity
    file: str
    span: Span
    system: str
    message: str
    trace: tuple[TraceEvent, ...] = ()
    related: tuple[str, ...] = ()
    notes: tuple[Note, ...] = ()
    # diagnostics raised by one error site share a tag; pair_complementary
    # links red and blue marks within a site
    site: str = ""

    def sort_key(self) -> tuple:
        return (self.file, *self.span.sort_key()[1:], self.kind.value, self.id)


def stable_id(
    kind: DiagnosticKind, file: str, span: Span, complement_spans: Iterable[Span] = ()
) -> str:
    """Content hash of an error site, stable across identical runs."""
    parts = [kind.value, file, str(span.sort_key())]
    parts.extend(str(s.sort_key()) for s in sorted(complement_spans, key=Span.sort_key))
    digest = hashlib.sha256("\x1f".join(parts).encode("utf-8")).hexdigest()
    return digest[:12]


def make_diagnostic(
    kind: DiagnosticKind,
    polarity: Polarity,
    span: Span,
    system: str,
    message: str,
    *,
    trace: tuple[TraceEvent, ...] = (),
    notes: tuple[Note, ...] = (),
    site: str = "",
    complement_spans: Iterable[Span] = (),
) -> Diagnostic:
    all_complements = list(complement_spans) + [n.span for n in notes]
    return Diagnostic(
        id=stable_id(kind, span.file, span, all_complements),
        kind=kind,
        polarity=polarity,
        file=span.file,
        span=span,
        system=system,
        message=message,
        trace=trace,
        notes=notes,
        site=site,
    )


def pair_complementary(diags: list[Diagnostic]) -> list[Diagnostic]:
    """Populate symmetric ``related`` links between the red and blue marks
    of each error site (diagnostics sharing a nonempty ``site`` tag)."""
    by_site: dict[str, list[Diagnostic]] = {}
    for d in diags:
        if d.site:
            by_site.setdefault(d.site, []).append(d)
    linked: dict[str, tuple[str, ...]] = {}
    for group in by_site.values():
        reds = [d for d in group if d.polarity is Polarity.RED]
        blues = [d for d in group if d.polarity is Polarity.BLUE]
        for r in reds:
            linked[r.id] = tuple(b.id for b in blues)
        for b in blues:
            linked[b.id] = tuple(r.id for r in reds)
    return [replace(d, related=linked.get(d.id, d.related)) for d in diags]


def sort_diagnostics(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    return sorted(diags, key=Diagnostic.sort_key)


def dedupe(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    """Drop diagnostics blaming an already-seen (kind, span, complements)."""
    seen: set[str] = set()
    out: list[Diagnostic] = []
    for d in diags:
        if d.id not in seen:
            seen.add(d.id)
            out.append(d)
    return out


# ── text rendering ────────────────────────────────────────────────

class MissingSource(Exception):
    pass


_COLORS = {Polarity.RED: "\x1b[31m", Polarity.BLUE: "\x1b[34m", Polarity.WARNING: "\x1b[33m"}
_RESET = "\x1b[0m"


def render_text(
    diags: list[Diagnostic],
    sources: Mapping[str, str],
    stats: "Stats | None" = None,
    color: bool = False,
) -> str:
    """Human-readable report: location line, source excerpt with carets,
    trace summary, and ``see also`` lines for linked spans."""
    files = {name: SourceFile(name, text) for name, text in sources.items()}
    by_id = {d.id: d for d in diags}
    out: list[str] = []

    if not diags:
        explored = stats.configurations if stats else 0
        return f"no errors found ({explored} configurations explored)\n"

    def paint(text: str, polarity: Polarity) -> str:
        if not color:
            return text
        return f"{_COLORS[polarity]}{text}{_RESET}"

    for d in sort_diagnostics(diags):
        if d.file not in files:
            raise MissingSource(f"no source registered for {d.file}")
        src = files[d.file]
        head = f"{d.file}:{d.span.start_line}:{d.span.start_col}: "
        head += paint(f"[{d.kind.value}]", d.polarity) + f" {d.message}"
        out.append(head)
        line = src.line(d.span.start_line)
        out.append(f"  {line}")
        width = (
            d.span.end_col - d.span.start_col
            if d.span.end_line == d.span.start_line
            else len(line) - d.span.start_col + 1
        )
        carets = " " * (d.span.start_col - 1) + "^" * max(width, 1)
        out.append("  " + paint(carets, d.polarity))
        if d.trace:
            out.append("  via: " + " -> ".join(str(ev) for ev in d.trace))
        for rid in d.related:
            rel = by_id.get(rid)
            if rel is not None:
                out.append(
                    f"  see also: {rel.file}:{rel.span.start_line}:{rel.span.start_col}"
                    f" ({rel.polarity.value} {rel.kind.value})"
                )
        for note in d.notes:
            out.append(
                f"  see also: {note.file}:{note.span.start_line}:{note.span.start_col}"
                f" ({note.message})"
            )
        out.append("")
    return "\n".join(out)


# ── JSON rendering ────────────────────────────────────────────────

@dataclass(slots=True)
class Stats:
    configurations: int = 0
    bound: int = 0
    elapsed_ms: int = 0


def _span_json(span: Span) -> dict:
    return {
        "startLine": span.start_line,
        "startCol": span.start_col,
        "endLine": span.end_line,
        "endCol": span.end_col,
    }


def render_json(diags: list[Diagnostic], stats: Stats) -> bytes:
    """UTF-8 JSON report with a fixed key order; byte-deterministic for
    identical inputs."""
    payload = {
        "diagnostics": [
            {
                "id": d.id,
                "kind": d.kind.value,
                "polarity": d.polarity.value,
                "file": d.file,
                "span": _span_json(d.span),
                "system": d.system,
                "message": d.message,
                "trace": [
                    {"actor": ev.actor, "action": ev.action, "peer": ev.peer, "label": ev.label}
                    for ev in d.trace
                ],
                "related": list(d.related),
            }
            for d in sort_diagnostics(diags)
        ],
        "stats": {
            "configurations": stats.configurations,
            "bound": stats.bound,
            "elapsedMs": stats.elapsed_ms,
        },
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def parse_report(data: bytes) -> tuple[list[Diagnostic], Stats]:
    """Inverse of render_json over the schema'd fields (notes and site tags
    are not part of the wire format)."""
    payload = json.loads(data.decode("utf-8"))
    diags = []
    for d in payload["diagnostics"]:
        s = d["span"]
        diags.append(
            Diagnostic(
                id=d["id"],
                kind=DiagnosticKind(d["kind"]),
                polarity=Polarity(d["polarity"]),
                file=d["file"],
                span=Span(d["file"], s["startLine"], s["startCol"], s["endLine"], s["endCol"]),
                system=d["system"],
                message=d["message"],
                trace=tuple(
                    TraceEvent(ev["actor"], ev["action"], ev["peer"], ev["label"])
                    for ev in d["trace"]
                ),
                related=tuple(d["related"]),
            )
        )
    st = payload["stats"]
    return diags, Stats(st["configurations"], st["bound"], st["elapsedMs"])


def schema_projection(d: Diagnostic) -> Diagnostic:
    """The diagnostic as seen through the wire format (drops notes/site)."""
    return replace(d, notes=(), site="")
