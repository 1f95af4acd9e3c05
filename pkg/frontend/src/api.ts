// Thin typed client over the session service; every call is a plain fetch.

import type {
  Adjustment,
  AdjustResponse,
  DatasetInfo,
  Overview,
  QueryResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export class Client {
  constructor(private baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      const error = (body as { error?: { code: string; message: string } }).error;
      throw new ApiError(error?.code ?? "Unknown", error?.message ?? response.statusText);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  listDatasets(): Promise<{ datasets: DatasetInfo[] }> {
    return this.request("/datasets");
  }

  overview(datasetId: string): Promise<Overview> {
    return this.request(`/datasets/${datasetId}/overview`);
  }

  rows(datasetId: string): Promise<{ rows: Record<string, unknown>[] }> {
    return this.request(`/datasets/${datasetId}/rows`);
  }

  createSession(datasetId: string): Promise<{ sessionId: string }> {
    return this.post("/sessions", { datasetId });
  }

  postQuery(sessionId: string, query: string): Promise<QueryResponse> {
    return this.post(`/sessions/${sessionId}/query`, { query });
  }

  postAdjustment(sessionId: string, adjustment: Adjustment): Promise<AdjustResponse> {
    return this.post(`/sessions/${sessionId}/adjust`, { adjustment });
  }

  log(sessionId: string): Promise<{ entries: { kind: string; payload: unknown }[] }> {
    return this.request(`/sessions/${sessionId}/log`);
  }
}
