// JSON payload shapes of the backend /api/* routes. The UI computes no
// scores of its own: every number rendered comes from these fields.

export interface SourceRef {
  engine: string;
  rank: number;
}

export interface ResultPayload {
  position: number;
  url: string;
  title: string;
  snippet: string;
  domain: string;
  score: number;
  pagerank: number;
  features: Record<string, number>;
  sources: SourceRef[];
}

export interface SearchPayload {
  query: string;
  kind: string;
  expansions: Record<string, string[]>;
  k: number;
  degraded: boolean;
  failed_engines: string[];
  results: ResultPayload[];
}

export interface RawHit {
  rank: number;
  url: string;
  title: string;
  snippet: string;
  domain: string;
}

export interface ComparePayload {
  query: string;
  k: number;
  degraded: boolean;
  engines: Record<string, RawHit[]>;
  merged_system: string;
  merged: ResultPayload[];
}

export interface FeedbackBody {
  query: string;
  system: string;
  score: number;
}
