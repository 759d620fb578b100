// MV3 service worker entry: wires the testable core to the chrome APIs.

import { ApiClient } from "./api.js";
import { BackgroundCore } from "./background_core.js";
import { DEFAULT_OPTIONS, type RuntimeMessage } from "./types.js";

async function loadOptions() {
  const stored = await chrome.storage.sync.get({ ...DEFAULT_OPTIONS });
  return {
    backendUrl: String(stored.backendUrl ?? DEFAULT_OPTIONS.backendUrl),
    blockingMode: Boolean(stored.blockingMode),
  };
}

function bootstrap(): void {
  const api = new ApiClient({
    baseUrl: DEFAULT_OPTIONS.backendUrl,
    fetchFn: async (input, init) => {
      // Resolve the configured backend per request so options apply live.
      const options = await loadOptions();
      const url = String(input).replace(DEFAULT_OPTIONS.backendUrl, options.backendUrl);
      return fetch(url, init);
    },
  });

  const core = new BackgroundCore({
    api,
    setBadge: async (tabId, text, color, title) => {
      await chrome.action.setBadgeText({ tabId, text });
      await chrome.action.setBadgeBackgroundColor({ tabId, color });
      await chrome.action.setTitle({ tabId, title });
    },
    notify: (title, message) => {
      chrome.notifications?.create({ type: "basic", title, message });
    },
    redirectTab: (tabId, url) => {
      void chrome.tabs.update(tabId, { url });
    },
    blockingMode: async () => (await loadOptions()).blockingMode,
    warningUrl: (pageUrl) =>
      chrome.runtime.getURL(`warning.html?blocked=${encodeURIComponent(pageUrl)}`),
    now: () => Date.now(),
    newSessionId: () => crypto.randomUUID(),
  });

  chrome.webNavigation.onCommitted.addListener((details) => {
    if (details.frameId !== 0) {
      return;
    }
    const qualifiers = details.transitionQualifiers ?? [];
    const isRedirect =
      qualifiers.includes("server_redirect") || qualifiers.includes("client_redirect");
    if (isRedirect) {
      void core.onRedirect(details.tabId, details.url);
    } else {
      void core.onNavigationCommitted(details.tabId, details.url);
    }
  });

  chrome.webNavigation.onCompleted.addListener((details) => {
    if (details.frameId !== 0) {
      return;
    }
    // Ask the content script for the serialized DOM, then analyze. A
    // missing content script (e.g. chrome:// pages) degrades to URL-only.
    void chrome.tabs
      .sendMessage(details.tabId, { type: "capture_dom" })
      .then((reply) => {
        const html =
          reply && typeof reply === "object" && "html" in reply
            ? String((reply as { html: unknown }).html)
            : "";
        return core.onDomCaptured(details.tabId, html);
      })
      .catch(() => core.onDomCaptured(details.tabId, ""));
  });

  chrome.webRequest.onCompleted.addListener(
    (details) => {
      if (details.tabId >= 0 && details.type !== "main_frame") {
        void core.onRequestObserved(details.tabId, details.url);
      }
    },
    { urls: ["http://*/*", "https://*/*"] },
  );

  chrome.tabs.onRemoved.addListener((tabId) => core.dropTab(tabId));

  chrome.runtime.onMessage.addListener((message, sender, sendResponse) => {
    const msg = message as RuntimeMessage;
    if (msg.type === "session_event" && sender.tab?.id !== undefined) {
      void core.onSessionEvent(sender.tab.id, msg.event);
      return;
    }
    if (msg.type === "get_popup_state") {
      void chrome.tabs
        .query({ active: true, currentWindow: true })
        .then((tabs) => {
          const tabId = tabs[0]?.id;
          sendResponse(tabId === undefined ? null : core.popupState(tabId));
        });
      return true; // async sendResponse
    }
    if (msg.type === "reanalyze") {
      void chrome.tabs
        .query({ active: true, currentWindow: true })
        .then((tabs) => {
          const tabId = tabs[0]?.id;
          if (tabId !== undefined) {
            void core.reanalyze(tabId);
          }
          sendResponse(null);
        });
      return true;
    }
  });
}

if (typeof chrome !== "undefined" && chrome.runtime !== undefined) {
  bootstrap();
}
