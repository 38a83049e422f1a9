/**
 * Two-pane live editor: specification and peers on the left, the focused
 * system on the right. Each pane is a textarea over a mirrored backdrop
 * that carries the underline marks; clicking inside an underline
 * highlights its complementary marks, hovering shows kind, message and
 * trace.
 */

import { postCheck, type CheckReport } from "./api.js";
import {
  decorationsFor,
  jumpTargets,
  polarityClass,
  spanToRange,
  systemNames,
  type Decoration,
} from "./decorations.js";
import {
  SEED_FOCUS,
  SEED_IMPL,
  SEED_IMPL_NAME,
  SEED_SPEC,
  SEED_SPEC_NAME,
} from "./seeds.js";
import { EditorSession } from "./session.js";

interface Pane {
  name: string;
  textarea: HTMLTextAreaElement;
  backdrop: HTMLElement;
  decorations: Decoration[];
}

const panes: Pane[] = [];
let session: EditorSession;
let lastReport: CheckReport | null = null;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  return node;
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Rebuild a pane's backdrop HTML from its text and decorations. */
function renderBackdrop(pane: Pane): void {
  const text = pane.textarea.value;
  let html = "";
  let cursor = 0;
  for (const deco of pane.decorations) {
    if (deco.start < cursor) {
      continue; // overlapping mark; keep the earlier one
    }
    html += escapeHtml(text.slice(cursor, deco.start));
    html += `<mark class="${polarityClass(deco.polarity)}" data-id="${deco.id}">`;
    html += escapeHtml(text.slice(deco.start, deco.end));
    html += "</mark>";
    cursor = deco.end;
  }
  html += escapeHtml(text.slice(cursor));
  pane.backdrop.innerHTML = html + "\n";
}

function syncScroll(pane: Pane): void {
  pane.backdrop.scrollTop = pane.textarea.scrollTop;
  pane.backdrop.scrollLeft = pane.textarea.scrollLeft;
}

function decorationAt(pane: Pane, offset: number): Decoration | null {
  for (const deco of pane.decorations) {
    if (deco.start <= offset && offset < deco.end) {
      return deco;
    }
  }
  return null;
}

function applyReport(report: CheckReport, stale: boolean): void {
  lastReport = report;
  for (const pane of panes) {
    pane.decorations = decorationsFor(pane.name, pane.textarea.value, report.diagnostics);
    renderBackdrop(pane);
    syncScroll(pane);
  }
  document.body.classList.toggle("stale", stale);
  renderDiagnosticList(report);
}

function renderDiagnosticList(report: CheckReport): void {
  const list = document.getElementById("diagnostics")!;
  list.textContent = "";
  for (const d of report.diagnostics) {
    const item = el("li", `diag ${polarityClass(d.polarity)}`);
    const where = `${d.file}:${d.span.startLine}:${d.span.startCol}`;
    item.textContent = `${where} [${d.kind}] ${d.message}`;
    item.addEventListener("click", () => jumpComplementary(d.id));
    list.appendChild(item);
  }
}

/** Highlight every span related to the clicked diagnostic and scroll the
 * first one into view (possibly in the other pane). */
function jumpComplementary(id: string): void {
  if (!lastReport) {
    return;
  }
  const targets = jumpTargets(lastReport, id);
  document.querySelectorAll("mark.flash").forEach((m) => m.classList.remove("flash"));
  let first: HTMLElement | null = null;
  for (const target of targets) {
    const pane = panes.find((p) => p.name === target.file);
    if (!pane) {
      continue;
    }
    const mark = pane.backdrop.querySelector<HTMLElement>(`mark[data-id="${target.id}"]`);
    if (mark) {
      mark.classList.add("flash");
      first = first ?? mark;
    }
    const range = spanToRange(pane.textarea.value, target.span);
    if (range && !first) {
      pane.textarea.setSelectionRange(range.start, range.end);
    }
  }
  first?.scrollIntoView({ block: "center", behavior: "smooth" });
}

function showTooltip(pane: Pane, deco: Decoration, x: number, y: number): void {
  const tooltip = document.getElementById("tooltip")!;
  tooltip.textContent = deco.hover;
  tooltip.style.display = "block";
  tooltip.style.left = `${x + 12}px`;
  tooltip.style.top = `${y + 12}px`;
}

function hideTooltip(): void {
  document.getElementById("tooltip")!.style.display = "none";
}

function markUnderPointer(pane: Pane, event: MouseEvent): HTMLElement | null {
  // the textarea sits above the backdrop; probe beneath it
  pane.textarea.style.pointerEvents = "none";
  const under = document.elementFromPoint(event.clientX, event.clientY);
  pane.textarea.style.pointerEvents = "";
  return under instanceof HTMLElement && under.tagName === "MARK" ? under : null;
}

function buildPane(name: string, text: string, host: HTMLElement): Pane {
  const wrap = el("div", "pane");
  const title = el("div", "pane-title");
  title.textContent = name;
  const editor = el("div", "editor");
  const backdrop = el("pre", "backdrop");
  const textarea = el("textarea");
  textarea.spellcheck = false;
  textarea.value = text;
  editor.append(backdrop, textarea);
  wrap.append(title, editor);
  host.appendChild(wrap);

  const pane: Pane = { name, textarea, backdrop, decorations: [] };

  textarea.addEventListener("input", () => {
    session.edit(name, textarea.value);
    // old marks may no longer match the buffer; re-derive what still fits
    pane.decorations = lastReport
      ? decorationsFor(name, textarea.value, lastReport.diagnostics)
      : [];
    renderBackdrop(pane);
    document.body.classList.add("stale");
  });
  textarea.addEventListener("scroll", () => syncScroll(pane));
  textarea.addEventListener("click", () => {
    const deco = decorationAt(pane, textarea.selectionStart);
    if (deco) {
      jumpComplementary(deco.id);
    }
  });
  textarea.addEventListener("mousemove", (event) => {
    const mark = markUnderPointer(pane, event);
    if (mark && mark.dataset.id) {
      const deco = pane.decorations.find((d) => d.id === mark.dataset.id);
      if (deco) {
        showTooltip(pane, deco, event.clientX, event.clientY);
        return;
      }
    }
    hideTooltip();
  });
  textarea.addEventListener("mouseleave", hideTooltip);
  return pane;
}

function rebuildFocusSelector(): void {
  const select = document.getElementById("focus") as HTMLSelectElement;
  const names = systemNames(session.buffers);
  const current = session.focus;
  select.textContent = "";
  for (const name of names) {
    const option = el("option");
    option.value = name;
    option.textContent = name;
    select.appendChild(option);
  }
  if (current && names.includes(current)) {
    select.value = current;
  } else if (names.length > 0) {
    select.value = names[names.length - 1];
    session.setFocus(select.value);
  }
}

export function boot(): void {
  const host = document.getElementById("panes")!;
  const status = document.getElementById("status")!;

  session = new EditorSession(
    [
      { name: SEED_SPEC_NAME, text: SEED_SPEC },
      { name: SEED_IMPL_NAME, text: SEED_IMPL },
    ],
    SEED_FOCUS,
    {
      post: postCheck,
      onRender: (update) => applyReport(update.report, update.stale),
      onStatus: (s) => {
        status.textContent = s.detail;
        status.className = `status ${s.state}`;
      },
    },
  );

  panes.push(buildPane(SEED_SPEC_NAME, SEED_SPEC, host));
  panes.push(buildPane(SEED_IMPL_NAME, SEED_IMPL, host));

  rebuildFocusSelector();
  const select = document.getElementById("focus") as HTMLSelectElement;
  select.value = SEED_FOCUS;
  session.setFocus(SEED_FOCUS);
  select.addEventListener("change", () => session.setFocus(select.value || null));

  session.checkNow();
}

boot();
