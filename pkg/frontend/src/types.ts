/** Payload shapes of the skillprice HTTP API (JSON over /api/v1). */

export interface SkillRow {
  skill: string;
  premium: number | null;
  price_factor: number | null;
  price_additive: number | null;
  complementarity_premium: number | null;
  complementarity_price: number | null;
  automation_probability: number | null;
  demand: number;
  supply: number;
  community: number;
  community_label: string;
}

export interface NeighborRow extends SkillRow {
  weight: number;
}

export interface SkillsResponse {
  skills: SkillRow[];
  total: number;
}

export interface NeighborsResponse {
  skill: string;
  neighbors: NeighborRow[];
}

export interface CommunityInfo {
  community: number;
  label: string;
  size: number;
  mean_premium: number | null;
}

export interface CommunitiesResponse {
  communities: CommunityInfo[];
  modularity: number;
}

export interface MetaResponse {
  schema_version: number;
  build_timestamp: string;
  counts: Record<string, number>;
  config: Record<string, unknown>;
}

export interface WhatIfResult {
  bundle: string[];
  inferred_domain: number;
  candidate: string;
  candidate_premium_in_domain: number | null;
  fallback: boolean;
  candidate_complementarity: number;
  automation_probability: number | null;
  distance: number | null;
  verdict_score: number;
  no_op: boolean;
}

export interface RecommendResponse {
  results: WhatIfResult[];
}

export interface TrendResponse {
  skill: string;
  windows: [number, number][];
  premium: (number | null)[];
  demand: number[];
  supply: number[];
}

export interface ApiErrorBody {
  error: {
    code: string;
    message: string;
    suggestions?: string[];
  };
}
