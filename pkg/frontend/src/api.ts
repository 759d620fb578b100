// Thin client for the backend /api/v1 contract. All heavy computation is
// server-side; this never does model math. Analyze retries with
// exponential backoff (3 attempts max) and resolves to null on failure so
// callers can fall back to the "unknown" badge without blocking the page.

import type {
  AnalyzeRequest,
  AnalyzeResponse,
  SessionEventWire,
} from "./types.js";

export interface ApiClientConfig {
  baseUrl: string;
  fetchFn?: typeof fetch;
  sleepFn?: (ms: number) => Promise<void>;
  maxAttempts?: number;
  backoffBaseMs?: number;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: typeof fetch;
  private readonly sleepFn: (ms: number) => Promise<void>;
  readonly maxAttempts: number;
  private readonly backoffBaseMs: number;

  constructor(config: ApiClientConfig) {
    this.baseUrl = config.baseUrl.replace(/\/$/, "");
    this.fetchFn = config.fetchFn ?? fetch;
    this.sleepFn = config.sleepFn ?? defaultSleep;
    this.maxAttempts = config.maxAttempts ?? 3;
    this.backoffBaseMs = config.backoffBaseMs ?? 250;
  }

  private async postJson(path: string, body: unknown): Promise<AnalyzeResponse | null> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      return null;
    }
    return (await response.json()) as AnalyzeResponse;
  }

  async analyze(
    request: AnalyzeRequest,
    force = false,
  ): Promise<AnalyzeResponse | null> {
    const path = force ? "/api/v1/analyze?force=true" : "/api/v1/analyze";
    for (let attempt = 0; attempt < this.maxAttempts; attempt++) {
      try {
        const result = await this.postJson(path, request);
        if (result !== null) {
          return result;
        }
      } catch {
        // network failure: fall through to backoff
      }
      if (attempt < this.maxAttempts - 1) {
        await this.sleepFn(this.backoffBaseMs * 2 ** attempt);
      }
    }
    return null;
  }

  // Single attempt: the caller buffers failed events instead of retrying.
  async postEvent(
    sessionId: string,
    event: SessionEventWire,
  ): Promise<AnalyzeResponse | null> {
    try {
      return await this.postJson(
        `/api/v1/sessions/${encodeURIComponent(sessionId)}/events`,
        event,
      );
    } catch {
      return null;
    }
  }
}
