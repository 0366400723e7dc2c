/** Thin typed client over the session service JSON API.

The console consumes exactly the endpoints the service publishes; nothing
here can reach manifest data before an explicit reveal call. */

import type {
  ErrorBody,
  MetricsReport,
  PredictionAccepted,
  PredictionRequest,
  RevealResponse,
  ServedBar,
  SessionCreated,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ReportParams {
  horizon?: number;
  atr?: number;
  k?: number;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (resp.status === 204) return null as T;
    if (!resp.ok) {
      let code = "HTTP_ERROR";
      let message = `${resp.status}`;
      try {
        const parsed = (await resp.json()) as ErrorBody;
        code = parsed.code ?? code;
        message = parsed.message ?? message;
      } catch {
        /* non-JSON error body: keep defaults */
      }
      throw new ApiError(resp.status, code, message);
    }
    return (await resp.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  createSession(body: {
    inline_bars?: unknown[];
    csv_path?: string;
    symbol?: string;
    timeframe?: string;
    seed: number;
  }): Promise<SessionCreated> {
    return this.request("POST", "/sessions", body);
  }

  /** Next anonymized bar, or null at end of stream (204). */
  nextBar(sessionId: string): Promise<ServedBar | null> {
    return this.request("GET", `/sessions/${sessionId}/bars/next`);
  }

  submitPrediction(sessionId: string, body: PredictionRequest): Promise<PredictionAccepted> {
    return this.request("POST", `/sessions/${sessionId}/predictions`, body);
  }

  seal(sessionId: string): Promise<{ session_id: string; state: string }> {
    return this.request("POST", `/sessions/${sessionId}/seal`);
  }

  reveal(sessionId: string): Promise<RevealResponse> {
    return this.request("POST", `/sessions/${sessionId}/reveal`);
  }

  report(sessionId: string, params: ReportParams = {}): Promise<MetricsReport> {
    const query = new URLSearchParams();
    if (params.horizon !== undefined) query.set("horizon", String(params.horizon));
    if (params.atr !== undefined) query.set("atr", String(params.atr));
    if (params.k !== undefined) query.set("k", String(params.k));
    const text = query.toString();
    return this.request("GET", `/sessions/${sessionId}/report${text ? "?" + text : ""}`);
  }
}
