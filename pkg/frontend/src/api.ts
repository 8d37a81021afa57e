// Thin fetch wrappers around the backend JSON routes.

import type { ComparePayload, FeedbackBody, SearchPayload } from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const resp = await fetch(url, { signal });
  if (!resp.ok) {
    let detail = `HTTP ${resp.status}`;
    try {
      const body = (await resp.json()) as { error?: string };
      if (body.error) detail = body.error;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private readonly base: string = '') {}

  search(q: string, k: number, weights: string | null, signal?: AbortSignal): Promise<SearchPayload> {
    const params = new URLSearchParams({ q, k: String(k) });
    if (weights !== null) params.set('weights', weights);
    return getJson<SearchPayload>(`${this.base}/api/search?${params}`, signal);
  }

  compare(q: string, k: number, signal?: AbortSignal): Promise<ComparePayload> {
    const params = new URLSearchParams({ q, k: String(k) });
    return getJson<ComparePayload>(`${this.base}/api/compare?${params}`, signal);
  }

  async feedback(body: FeedbackBody): Promise<void> {
    const resp = await fetch(`${this.base}/api/feedback`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, `feedback rejected (HTTP ${resp.status})`);
    }
  }
}
