/** Thin client for the millstone HTTP API. The explorer talks to nothing else. */

import type { SchemaDocument } from "./schema.js";

export interface QueryResponse {
  status: number;
  /** Exact response body bytes as text (used for snippet equivalence checks). */
  raw: string;
  body: { data?: Record<string, unknown>; errors?: ApiError[] };
}

export interface ApiError {
  code: string;
  message: string;
  path: string[];
}

export class ApiClient {
  constructor(
    public baseUrl: string,
    public token: string | null = null,
  ) {}

  async fetchSchema(): Promise<SchemaDocument> {
    const resp = await fetch(`${this.baseUrl}/api/schema`);
    if (!resp.ok) throw new Error(`schema fetch failed: HTTP ${resp.status}`);
    return (await resp.json()) as SchemaDocument;
  }

  async healthz(): Promise<{ status: string; indexes: string[] }> {
    const resp = await fetch(`${this.baseUrl}/healthz`);
    return (await resp.json()) as { status: string; indexes: string[] };
  }

  async runQuery(
    query: string,
    variables: Record<string, unknown> | null,
  ): Promise<QueryResponse> {
    const headers: Record<string, string> = { "content-type": "application/json" };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const payload: Record<string, unknown> = { query };
    if (variables !== null) payload["variables"] = variables;
    const resp = await fetch(`${this.baseUrl}/api`, {
      method: "POST",
      headers,
      body: JSON.stringify(payload),
    });
    const raw = await resp.text();
    return { status: resp.status, raw, body: JSON.parse(raw) };
  }
}
