// Content script: captures the DOM for analysis and forwards
// privacy-reduced interaction events. Field values never leave the page;
// form submissions are reduced to type counts before messaging.

import {
  countFieldTypes,
  hostOf,
  isSensitiveField,
  sameSite,
  truncateHtml,
  type FieldLike,
} from "./events.js";
import type { RuntimeMessage, SessionEventWire } from "./types.js";

function send(event: SessionEventWire): void {
  const message: RuntimeMessage = { type: "session_event", event };
  void chrome.runtime.sendMessage(message).catch(() => {
    // Worker asleep or gone; the page must never notice.
  });
}

function bootstrap(): void {
  const pageHost = location.hostname.toLowerCase();

  chrome.runtime.onMessage.addListener((message, _sender, sendResponse) => {
    const msg = message as RuntimeMessage;
    if (msg.type === "capture_dom") {
      sendResponse({ html: truncateHtml(document.documentElement.outerHTML) });
    }
  });

  document.addEventListener(
    "submit",
    (event) => {
      const form = event.target as HTMLFormElement | null;
      if (!form || !(form instanceof HTMLFormElement)) {
        return;
      }
      const fields: FieldLike[] = Array.from(form.elements).map((el) => ({
        type: (el as HTMLInputElement).type,
        name: (el as HTMLInputElement).name,
        id: el.id,
      }));
      const actionHost = hostOf(form.action || location.href);
      send({
        kind: "form_submit",
        timestamp_ms: Date.now(),
        target_host: actionHost,
        cross_origin: !sameSite(pageHost, actionHost),
        field_type_counts: countFieldTypes(fields),
      });
    },
    true,
  );

  document.addEventListener(
    "focusin",
    (event) => {
      const el = event.target as HTMLInputElement | null;
      if (el && el.tagName === "INPUT" && isSensitiveField(el)) {
        send({ kind: "focus_sensitive_field", timestamp_ms: Date.now() });
      }
    },
    true,
  );

  document.addEventListener(
    "click",
    () => send({ kind: "click", timestamp_ms: Date.now() }),
    true,
  );

  // Hover sampled coarsely; raw mouse trajectories stay on the page.
  let lastHover = 0;
  document.addEventListener(
    "mouseover",
    () => {
      const now = Date.now();
      if (now - lastHover > 2000) {
        lastHover = now;
        send({ kind: "hover", timestamp_ms: now });
      }
    },
    true,
  );
}

if (typeof chrome !== "undefined" && chrome.runtime !== undefined) {
  bootstrap();
}
