/** Thin typed client for the read-only skillprice API.
 *
 * The fetch implementation is injectable so tests can replay recorded
 * responses without a network.
 */

import type {
  ApiErrorBody,
  CommunitiesResponse,
  MetaResponse,
  NeighborsResponse,
  RecommendResponse,
  SkillRow,
  SkillsResponse,
  TrendResponse,
  WhatIfResult,
} from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly suggestions: string[];

  constructor(status: number, body: ApiErrorBody | null, fallback: string) {
    super(body?.error?.message ?? fallback);
    this.status = status;
    this.code = body?.error?.code ?? "unknown";
    this.suggestions = body?.error?.suggestions ?? [];
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, init);
    } catch (err) {
      throw new ApiError(0, null, `API unreachable: ${String(err)}`);
    }
    if (!res.ok) {
      let body: ApiErrorBody | null = null;
      try {
        body = (await res.json()) as ApiErrorBody;
      } catch {
        body = null;
      }
      throw new ApiError(res.status, body, `request failed: ${res.status}`);
    }
    return (await res.json()) as T;
  }

  meta(): Promise<MetaResponse> {
    return this.request<MetaResponse>("/meta");
  }

  skills(params: { community?: number; sort?: string; limit?: number } = {}): Promise<SkillsResponse> {
    const q = new URLSearchParams();
    if (params.community !== undefined) q.set("community", String(params.community));
    if (params.sort) q.set("sort", params.sort);
    if (params.limit !== undefined) q.set("limit", String(params.limit));
    const suffix = q.toString() ? `?${q.toString()}` : "";
    return this.request<SkillsResponse>(`/skills${suffix}`);
  }

  skill(slug: string): Promise<SkillRow> {
    return this.request<SkillRow>(`/skills/${encodeURIComponent(slug)}`);
  }

  neighbors(slug: string, k = 10): Promise<NeighborsResponse> {
    return this.request<NeighborsResponse>(`/skills/${encodeURIComponent(slug)}/neighbors?k=${k}`);
  }

  communities(): Promise<CommunitiesResponse> {
    return this.request<CommunitiesResponse>("/communities");
  }

  trend(slug: string): Promise<TrendResponse> {
    return this.request<TrendResponse>(`/trends/${encodeURIComponent(slug)}`);
  }

  whatif(bundle: string[], candidate: string): Promise<WhatIfResult> {
    return this.request<WhatIfResult>("/whatif", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ bundle, candidate }),
    });
  }

  recommend(bundle: string[], k: number): Promise<RecommendResponse> {
    return this.request<RecommendResponse>("/recommend", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ bundle, k }),
    });
  }
}

/** Drops responses that arrive after a newer request was issued. */
export class SequenceGate {
  private issued = 0;
  private rendered = 0;

  next(): number {
    return ++this.issued;
  }

  /** True when `seq` is still the newest request; records it as rendered. */
  accept(seq: number): boolean {
    if (seq < this.rendered || seq < this.issued) return false;
    this.rendered = seq;
    return true;
  }
}
