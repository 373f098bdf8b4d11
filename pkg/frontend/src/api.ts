import type { ControlRequest, PlaylistSummary, Snapshot } from "./types.js";

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

const DEFAULT_CAPTURE_INTERVAL_MS = 3000;

/** Thin typed client over the backend wire contracts. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => globalThis.fetch(url, init),
  ) {}

  async createSession(): Promise<string> {
    const doc = await this.json("POST", "/api/sessions");
    return (doc as { session_id: string }).session_id;
  }

  async postFrame(sessionId: string, imageB64: string, capturedAtMs: number): Promise<Snapshot> {
    return (await this.json("POST", `/api/sessions/${sessionId}/frames`, {
      image_b64: imageB64,
      captured_at_ms: capturedAtMs,
    })) as Snapshot;
  }

  async control(sessionId: string, request: ControlRequest): Promise<Snapshot> {
    return (await this.json("POST", `/api/sessions/${sessionId}/control`, request)) as Snapshot;
  }

  async state(sessionId: string): Promise<Snapshot> {
    return (await this.json("GET", `/api/sessions/${sessionId}/state`)) as Snapshot;
  }

  async playlists(): Promise<PlaylistSummary[]> {
    const doc = await this.json("GET", "/api/playlists");
    return (doc as { playlists: PlaylistSummary[] }).playlists;
  }

  /** Capture cadence hint from the service root; defaults when unreachable. */
  async captureIntervalMs(): Promise<number> {
    try {
      const doc = (await this.json("GET", "/")) as { capture_interval_ms?: number };
      return doc.capture_interval_ms ?? DEFAULT_CAPTURE_INTERVAL_MS;
    } catch {
      return DEFAULT_CAPTURE_INTERVAL_MS;
    }
  }

  /** Track ids are library-relative paths: encode segments, keep the slashes. */
  audioUrl(trackId: string): string {
    const path = trackId.split("/").map(encodeURIComponent).join("/");
    return `${this.baseUrl}/api/audio/${path}`;
  }

  eventsUrl(sessionId: string): string {
    return `${this.baseUrl}/api/sessions/${sessionId}/events`;
  }

  private async json(method: string, path: string, body?: unknown): Promise<unknown> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const doc = (await response.json()) as { detail?: string };
        if (doc.detail) detail = doc.detail;
      } catch {
        // keep statusText
      }
      throw new ApiError(response.status, `${method} ${path} failed: ${detail}`);
    }
    return response.json();
  }
}
