// Badge rendering rules: the tier is a pure function of the latest
// backend response (or "unknown" when there is none).

import type { AnalyzeResponse, BadgeState, Tier } from "./types.js";

export const BADGE_COLORS: Record<Tier, string> = {
  safe: "#1e8e3e",     // green
  caution: "#f9ab00",  // yellow
  danger: "#d93025",   // red
  unknown: "#9aa0a6",  // gray
};

export const BADGE_TEXT: Record<Tier, string> = {
  safe: "OK",
  caution: "!",
  danger: "!!",
  unknown: "?",
};

export const TIER_ORDER: Record<Tier, number> = {
  unknown: -1,
  safe: 0,
  caution: 1,
  danger: 2,
};

export function tierFromResponse(response: AnalyzeResponse | null): Tier {
  return response === null ? "unknown" : response.verdict;
}

export function badgeStateFrom(
  response: AnalyzeResponse | null,
  now: number,
): BadgeState {
  return {
    tier: tierFromResponse(response),
    score: response === null ? null : response.score,
    lastUpdated: now,
  };
}

export function tierRose(previous: Tier, next: Tier): boolean {
  return TIER_ORDER[next] > TIER_ORDER[previous];
}

export function badgeTitle(state: BadgeState): string {
  if (state.tier === "unknown") {
    return "websentinel: no assessment";
  }
  const score = state.score === null ? "?" : state.score.toFixed(0);
  return `websentinel: ${state.tier} (risk ${score}/100)`;
}
