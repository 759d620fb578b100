// Session-event plumbing shared by the content script and the worker:
// privacy-reducing form capture (counts only) and the offline buffer.

import type { SessionEventWire } from "./types.js";

export const MAX_BUFFERED_EVENTS = 100;
export const MAX_DOM_BYTES = 1_000_000;

const SENSITIVE_NAME_RE = /ssn|card|cvv/i;

export interface FieldLike {
  type?: string;
  name?: string;
  id?: string;
}

// Reduce a form to {field type -> count}. Values never appear: only the
// type attribute is read, and unknown types fall under "text".
export function countFieldTypes(fields: Iterable<FieldLike>): Record<string, number> {
  const counts: Record<string, number> = {};
  for (const field of fields) {
    const type = (field.type || "text").toLowerCase();
    counts[type] = (counts[type] ?? 0) + 1;
  }
  return counts;
}

export function isSensitiveField(field: FieldLike): boolean {
  if ((field.type || "").toLowerCase() === "password") {
    return true;
  }
  return SENSITIVE_NAME_RE.test(`${field.name ?? ""} ${field.id ?? ""}`);
}

export function truncateHtml(html: string, cap = MAX_DOM_BYTES): string {
  return html.length > cap ? html.slice(0, cap) : html;
}

export function hostOf(url: string): string | null {
  try {
    return new URL(url).hostname.toLowerCase();
  } catch {
    return null;
  }
}

// Client-side cross-origin heuristic (last two labels); the backend
// recomputes with its full public-suffix data.
export function sameSite(hostA: string | null, hostB: string | null): boolean {
  if (!hostA || !hostB) {
    return true;
  }
  const tail = (h: string) => h.split(".").slice(-2).join(".");
  return tail(hostA) === tail(hostB);
}

// FIFO buffer for events that could not be delivered; beyond the cap the
// oldest entries are discarded first.
export class EventBuffer {
  private items: SessionEventWire[] = [];

  constructor(private readonly cap = MAX_BUFFERED_EVENTS) {}

  get size(): number {
    return this.items.length;
  }

  push(event: SessionEventWire): void {
    this.items.push(event);
    if (this.items.length > this.cap) {
      this.items.splice(0, this.items.length - this.cap);
    }
  }

  snapshot(): SessionEventWire[] {
    return [...this.items];
  }

  // Deliver FIFO until a post fails; undelivered events stay buffered.
  async flush(post: (event: SessionEventWire) => Promise<boolean>): Promise<number> {
    let delivered = 0;
    while (this.items.length > 0) {
      const next = this.items[0];
      if (!(await post(next))) {
        break;
      }
      this.items.shift();
      delivered++;
    }
    return delivered;
  }
}
