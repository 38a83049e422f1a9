/**
 * The editing session: buffers, debounced checking, and revision safety.
 *
 * Every edit bumps the revision. A check request fires after a quiet
 * period and carries the revision it was computed for; a response is
 * rendered only if no newer edit happened in the meantime, so underlines
 * never derive from a superseded buffer state. At most one request is in
 * flight; an edit arriving mid-flight schedules a re-check as soon as the
 * stale response lands.
 *
 * Timer and transport are injected so the contracts are testable without
 * a browser.
 */

import type { BufferFile, CheckReport, PostCheck } from "./api.js";

export const DEBOUNCE_MS = 250;

export interface RenderUpdate {
  report: CheckReport;
  revision: number;
  stale: boolean;
}

export interface SessionStatus {
  state: "idle" | "checking" | "ok" | "error";
  detail: string;
}

export interface SessionOptions {
  post: PostCheck;
  onRender: (update: RenderUpdate) => void;
  onStatus?: (status: SessionStatus) => void;
  schedule?: (fn: () => void, ms: number) => ReturnType<typeof setTimeout>;
  cancel?: (handle: ReturnType<typeof setTimeout>) => void;
  debounceMs?: number;
}

export class EditorSession {
  readonly buffers: BufferFile[];
  focus: string | null;
  lastResponse: RenderUpdate | null = null;

  private revision = 0;
  private inFlight: number | null = null;
  private pendingTimer: ReturnType<typeof setTimeout> | null = null;
  private rerunAfterFlight = false;

  private readonly post: PostCheck;
  private readonly onRender: (update: RenderUpdate) => void;
  private readonly onStatus: (status: SessionStatus) => void;
  private readonly schedule: (fn: () => void, ms: number) => ReturnType<typeof setTimeout>;
  private readonly cancelTimer: (handle: ReturnType<typeof setTimeout>) => void;
  private readonly debounceMs: number;

  constructor(buffers: BufferFile[], focus: string | null, options: SessionOptions) {
    this.buffers = buffers.map((b) => ({ ...b }));
    this.focus = focus;
    this.post = options.post;
    this.onRender = options.onRender;
    this.onStatus = options.onStatus ?? (() => undefined);
    this.schedule = options.schedule ?? ((fn, ms) => setTimeout(fn, ms));
    this.cancelTimer = options.cancel ?? ((handle) => clearTimeout(handle));
    this.debounceMs = options.debounceMs ?? DEBOUNCE_MS;
  }

  get currentRevision(): number {
    return this.revision;
  }

  bufferText(name: string): string | undefined {
    return this.buffers.find((b) => b.name === name)?.text;
  }

  /** Record an edit and (re)start the quiet-period timer. */
  edit(name: string, text: string): void {
    const buffer = this.buffers.find((b) => b.name === name);
    if (!buffer || buffer.text === text) {
      return;
    }
    buffer.text = text;
    this.bump();
  }

  /** Change the focused system; re-checks after the same quiet period. */
  setFocus(focus: string | null): void {
    if (this.focus === focus) {
      return;
    }
    this.focus = focus;
    this.bump();
  }

  /** Fire immediately (initial load); bypasses the quiet period. */
  checkNow(): void {
    if (this.pendingTimer !== null) {
      this.cancelTimer(this.pendingTimer);
      this.pendingTimer = null;
    }
    this.fire();
  }

  private bump(): void {
    this.revision += 1;
    if (this.pendingTimer !== null) {
      this.cancelTimer(this.pendingTimer);
    }
    this.pendingTimer = this.schedule(() => {
      this.pendingTimer = null;
      this.fire();
    }, this.debounceMs);
  }

  private fire(): void {
    if (this.inFlight !== null) {
      // one request at a time; run again once the stale one lands
      this.rerunAfterFlight = true;
      return;
    }
    const revision = this.revision;
    this.inFlight = revision;
    this.onStatus({ state: "checking", detail: "checking..." });
    this.post({
      files: this.buffers.map((b) => ({ ...b })),
      focus: this.focus,
    }).then(
      (report) => this.handleResponse(revision, report),
      (error) => this.handleError(revision, error),
    );
  }

  private handleResponse(revision: number, report: CheckReport): void {
    this.inFlight = null;
    if (revision !== this.revision) {
      // superseded by a newer edit: discard, then check the newer state
      this.rerunAfterFlight = false;
      this.fire();
      return;
    }
    this.rerunAfterFlight = false;
    this.lastResponse = { report, revision, stale: false };
    this.onRender(this.lastResponse);
    const n = report.diagnostics.length;
    this.onStatus({
      state: "ok",
      detail:
        n === 0
          ? `no errors (${report.stats.configurations} configurations)`
          : `${n} diagnostic${n === 1 ? "" : "s"}`,
    });
  }

  private handleError(revision: number, error: unknown): void {
    this.inFlight = null;
    if (this.rerunAfterFlight || revision !== this.revision) {
      this.rerunAfterFlight = false;
      this.fire();
      return;
    }
    // keep the old underlines, but flag them as stale
    if (this.lastResponse !== null) {
      this.lastResponse = { ...this.lastResponse, stale: true };
      this.onRender(this.lastResponse);
    }
    this.onStatus({ state: "error", detail: `check failed: ${String(error)}` });
  }
}
