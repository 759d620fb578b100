// Wire contract of the backend /api/v1 endpoints plus extension-side state.

export type Verdict = "safe" | "caution" | "danger";
export type Tier = Verdict | "unknown";

export interface ExplanationItem {
  feature: string;
  label: string;
  delta: number;
}

export interface AnalyzeRequest {
  url: string;
  html?: string | null;
  session_id?: string | null;
}

export interface AnalyzeResponse {
  score: number;
  verdict: Verdict;
  cached: boolean;
  alert: boolean;
  explanation: ExplanationItem[];
  model_outputs: Record<string, number | boolean> | null;
  assessed_at: number;
}

export type EventKind =
  | "navigation"
  | "redirect"
  | "request"
  | "form_submit"
  | "focus_sensitive_field"
  | "click"
  | "hover";

// Privacy by schema: the only form payload is a type->count map.
export interface SessionEventWire {
  kind: EventKind;
  timestamp_ms: number;
  target_host?: string | null;
  cross_origin?: boolean;
  metadata_flags?: string[];
  field_type_counts?: Record<string, number>;
}

export interface BadgeState {
  tier: Tier;
  score: number | null;
  lastUpdated: number;
}

export interface ExtensionOptions {
  backendUrl: string;
  blockingMode: boolean;
}

export const DEFAULT_OPTIONS: ExtensionOptions = {
  backendUrl: "http://127.0.0.1:8300",
  blockingMode: false,
};

// Messages between content script, background worker and popup.
export type RuntimeMessage =
  | { type: "dom_captured"; html: string }
  | { type: "session_event"; event: SessionEventWire }
  | { type: "get_popup_state" }
  | { type: "reanalyze" };

export interface PopupState {
  status: "analyzing" | "ready";
  url: string | null;
  badge: BadgeState;
  cached: boolean;
  explanation: ExplanationItem[];
}
