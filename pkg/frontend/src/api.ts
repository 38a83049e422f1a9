/**
 * Wire types for the check service and a small fetch wrapper.
 *
 * The shapes mirror the server's diagnostics schema exactly; nothing here
 * reinterprets them.
 */

export interface WireSpan {
  startLine: number;
  startCol: number;
  endLine: number;
  endCol: number;
}

export type Polarity = "red" | "blue" | "warning";

export interface WireTraceEvent {
  actor: string;
  action: "send" | "receive";
  peer: string;
  label: string;
}

export interface WireDiagnostic {
  id: string;
  kind: string;
  polarity: Polarity;
  file: string;
  span: WireSpan;
  system: string;
  message: string;
  trace: WireTraceEvent[];
  related: string[];
}

export interface WireStats {
  configurations: number;
  bound: number;
  elapsedMs: number;
}

export interface CheckReport {
  diagnostics: WireDiagnostic[];
  stats: WireStats;
}

export interface BufferFile {
  name: string;
  text: string;
}

export interface CheckRequest {
  files: BufferFile[];
  focus: string | null;
  bound?: number;
}

export type PostCheck = (request: CheckRequest) => Promise<CheckReport>;

/** POST the request to the local check endpoint. */
export async function postCheck(request: CheckRequest): Promise<CheckReport> {
  const response = await fetch("/api/check", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(request),
  });
  if (!response.ok) {
    throw new Error(`check failed: HTTP ${response.status}`);
  }
  return (await response.json()) as CheckReport;
}
