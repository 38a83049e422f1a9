/**
 * Pure helpers turning wire diagnostics into per-buffer decoration data:
 * character offsets, polarity classes, hover text, and the targets of a
 * complementary-error jump.
 */

import type { BufferFile, CheckReport, WireDiagnostic, WireSpan } from "./api.js";

export interface Decoration {
  id: string;
  start: number;
  end: number;
  polarity: "red" | "blue" | "warning";
  kind: string;
  message: string;
  hover: string;
  related: string[];
}

export interface JumpTarget {
  file: string;
  span: WireSpan;
  id: string;
}

/** 1-based line/column to character offset; null outside the text. */
export function lineColToOffset(text: string, line: number, col: number): number | null {
  if (line < 1 || col < 1) {
    return null;
  }
  let offset = 0;
  let current = 1;
  while (current < line) {
    const next = text.indexOf("\n", offset);
    if (next < 0) {
      return null;
    }
    offset = next + 1;
    current += 1;
  }
  const lineEnd = text.indexOf("\n", offset);
  const length = (lineEnd < 0 ? text.length : lineEnd) - offset;
  if (col > length + 1) {
    return null;
  }
  return offset + col - 1;
}

export function spanToRange(text: string, span: WireSpan): { start: number; end: number } | null {
  const start = lineColToOffset(text, span.startLine, span.startCol);
  const end = lineColToOffset(text, span.endLine, span.endCol);
  if (start === null || end === null || end < start) {
    return null;
  }
  return { start, end };
}

export function traceSummary(diagnostic: WireDiagnostic): string {
  return diagnostic.trace
    .map((ev) => `${ev.actor}${ev.action === "send" ? "!" : "?"}${ev.label}`)
    .join(" -> ");
}

export function hoverText(diagnostic: WireDiagnostic): string {
  const lines = [`[${diagnostic.kind}] ${diagnostic.message}`];
  const trace = traceSummary(diagnostic);
  if (trace) {
    lines.push(`via: ${trace}`);
  }
  return lines.join("\n");
}

/**
 * Decorations for one buffer: only diagnostics targeting this file, with
 * spans that still fit the buffer's current revision (anything else is
 * suppressed rather than misplaced).
 */
export function decorationsFor(
  name: string,
  text: string,
  diagnostics: WireDiagnostic[],
): Decoration[] {
  const out: Decoration[] = [];
  for (const d of diagnostics) {
    if (d.file !== name) {
      continue;
    }
    const range = spanToRange(text, d.span);
    if (range === null) {
      continue;
    }
    out.push({
      id: d.id,
      start: range.start,
      end: range.end,
      polarity: d.polarity,
      kind: d.kind,
      message: d.message,
      hover: hoverText(d),
      related: d.related,
    });
  }
  out.sort((a, b) => a.start - b.start || a.end - b.end);
  return out;
}

/** Underline color class is a pure function of the polarity field. */
export function polarityClass(polarity: "red" | "blue" | "warning"): string {
  return `mark-${polarity}`;
}

/** Spans highlighted when a diagnostic's underline is clicked. */
export function jumpTargets(report: CheckReport, id: string): JumpTarget[] {
  const diagnostic = report.diagnostics.find((d) => d.id === id);
  if (!diagnostic) {
    return [];
  }
  const byId = new Map(report.diagnostics.map((d) => [d.id, d]));
  const targets: JumpTarget[] = [];
  for (const rid of diagnostic.related) {
    const rel = byId.get(rid);
    if (rel) {
      targets.push({ file: rel.file, span: rel.span, id: rel.id });
    }
  }
  return targets;
}

/** System names declared in the buffers, for the focus selector. */
export function systemNames(buffers: BufferFile[]): string[] {
  const names: string[] = [];
  const pattern = /^\s*system\s+([A-Za-z][A-Za-z0-9_']*)/gm;
  for (const buffer of buffers) {
    for (const match of buffer.text.matchAll(pattern)) {
      if (!names.includes(match[1])) {
        names.push(match[1]);
      }
    }
  }
  return names;
}
