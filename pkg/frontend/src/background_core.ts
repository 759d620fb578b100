// Per-tab orchestration, kept free of chrome.* so it is fully testable:
// navigation -> analyze -> badge; session events -> ratcheted rescore;
// offline buffering; optional blocking of danger pages.

import type { ApiClient } from "./api.js";
import {
  badgeStateFrom,
  badgeTitle,
  BADGE_COLORS,
  BADGE_TEXT,
  tierRose,
} from "./badge.js";
import { EventBuffer, hostOf, sameSite } from "./events.js";
import type {
  AnalyzeResponse,
  BadgeState,
  PopupState,
  SessionEventWire,
} from "./types.js";

export interface BackgroundDeps {
  api: Pick<ApiClient, "analyze" | "postEvent">;
  setBadge(tabId: number, text: string, color: string, title: string): void | Promise<void>;
  notify(title: string, message: string): void;
  redirectTab(tabId: number, url: string): void;
  blockingMode(): boolean | Promise<boolean>;
  warningUrl(pageUrl: string): string;
  now(): number;
  newSessionId(): string;
}

interface TabState {
  url: string | null;
  pageHost: string | null;
  sessionId: string | null;
  response: AnalyzeResponse | null;
  badge: BadgeState;
  buffer: EventBuffer;
  analyzing: boolean;
}

export class BackgroundCore {
  private tabs = new Map<number, TabState>();

  constructor(private readonly deps: BackgroundDeps) {}

  private freshTab(): TabState {
    return {
      url: null,
      pageHost: null,
      sessionId: null,
      response: null,
      badge: badgeStateFrom(null, this.deps.now()),
      buffer: new EventBuffer(),
      analyzing: false,
    };
  }

  private tab(tabId: number): TabState {
    let state = this.tabs.get(tabId);
    if (state === undefined) {
      state = this.freshTab();
      this.tabs.set(tabId, state);
    }
    return state;
  }

  badgeFor(tabId: number): BadgeState {
    return this.tab(tabId).badge;
  }

  popupState(tabId: number): PopupState {
    const state = this.tab(tabId);
    if (state.analyzing || (state.response === null && state.badge.tier === "unknown" && state.url === null)) {
      return {
        status: "analyzing",
        url: state.url,
        badge: state.badge,
        cached: false,
        explanation: [],
      };
    }
    return {
      status: "ready",
      url: state.url,
      badge: state.badge,
      cached: state.response?.cached ?? false,
      explanation: state.response?.explanation ?? [],
    };
  }

  private async renderBadge(tabId: number): Promise<void> {
    const state = this.tab(tabId);
    await this.deps.setBadge(
      tabId,
      BADGE_TEXT[state.badge.tier],
      BADGE_COLORS[state.badge.tier],
      badgeTitle(state.badge),
    );
  }

  private async applyResponse(
    tabId: number,
    response: AnalyzeResponse | null,
    options: { announce: boolean },
  ): Promise<void> {
    const state = this.tab(tabId);
    const previousTier = state.badge.tier;
    if (response !== null) {
      state.response = response;
    }
    state.badge = badgeStateFrom(state.response, this.deps.now());
    await this.renderBadge(tabId);

    if (response === null) {
      return;
    }
    const escalated = tierRose(previousTier, state.badge.tier);
    if (response.verdict === "danger" && (options.announce || escalated)) {
      this.deps.notify(
        "High-risk website",
        `Risk score ${response.score.toFixed(0)}/100 for ${state.url ?? "this page"}`,
      );
      if (await this.deps.blockingMode()) {
        this.deps.redirectTab(tabId, this.deps.warningUrl(state.url ?? ""));
      }
    }
  }

  // Main-frame navigation committed: reset per-tab state, show "unknown"
  // until the backend answers. Never blocks the page load.
  async onNavigationCommitted(tabId: number, url: string): Promise<void> {
    const state = this.freshTab();
    state.url = url;
    state.pageHost = hostOf(url);
    state.sessionId = this.deps.newSessionId();
    state.analyzing = true;
    this.tabs.set(tabId, state);
    await this.renderBadge(tabId);
  }

  // DOM arrived from the content script (page finished loading).
  async onDomCaptured(tabId: number, html: string): Promise<void> {
    const state = this.tab(tabId);
    if (state.url === null) {
      return;
    }
    const response = await this.deps.api.analyze({
      url: state.url,
      html,
      session_id: state.sessionId,
    });
    state.analyzing = false;
    await this.applyResponse(tabId, response, { announce: true });
  }

  async reanalyze(tabId: number): Promise<void> {
    const state = this.tab(tabId);
    if (state.url === null) {
      return;
    }
    const response = await this.deps.api.analyze(
      { url: state.url, session_id: state.sessionId },
      true,
    );
    await this.applyResponse(tabId, response, { announce: false });
  }

  // Redirect hop observed via the navigation API.
  async onRedirect(tabId: number, toUrl: string): Promise<void> {
    const state = this.tab(tabId);
    const target = hostOf(toUrl);
    await this.onSessionEvent(tabId, {
      kind: "redirect",
      timestamp_ms: Math.round(this.deps.now()),
      target_host: target,
      cross_origin: !sameSite(state.pageHost, target),
    });
  }

  // Sub-resource request observed (metadata only: host, never bodies).
  async onRequestObserved(tabId: number, requestUrl: string): Promise<void> {
    const state = this.tab(tabId);
    const target = hostOf(requestUrl);
    await this.onSessionEvent(tabId, {
      kind: "request",
      timestamp_ms: Math.round(this.deps.now()),
      target_host: target,
      cross_origin: !sameSite(state.pageHost, target),
    });
  }

  async onSessionEvent(tabId: number, event: SessionEventWire): Promise<void> {
    const state = this.tab(tabId);
    if (state.sessionId === null) {
      return;
    }
    const sessionId = state.sessionId;
    const post = async (e: SessionEventWire) =>
      (await this.deps.api.postEvent(sessionId, e)) !== null;

    // Deliver backlog first so the backend sees events in order.
    if (state.buffer.size > 0) {
      await state.buffer.flush(post);
    }
    if (state.buffer.size > 0) {
      state.buffer.push(event);
      return;
    }
    const response = await this.deps.api.postEvent(sessionId, event);
    if (response === null) {
      state.buffer.push(event);
      return;
    }
    // Re-render only when the returned (ratcheted) score raises the tier.
    if (tierRose(this.tab(tabId).badge.tier, response.verdict)) {
      await this.applyResponse(tabId, response, { announce: false });
    } else {
      state.response = response;
    }
  }

  bufferedEventCount(tabId: number): number {
    return this.tab(tabId).buffer.size;
  }

  dropTab(tabId: number): void {
    this.tabs.delete(tabId);
  }
}
