/** Thin typed client over the annotation service JSON API.
 *
 * Service errors (4xx/5xx with an {"error": ...} body) become ApiError with
 * the HTTP status attached; transport failures keep their original type so
 * callers can distinguish "the service said no" from "the network is down".
 */

import type { NextTaskResponse, Progress, Submission } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<Response>;

async function errorFrom(response: Response): Promise<ApiError> {
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string };
    if (typeof body.error === "string" && body.error) {
      message = body.error;
    }
  } catch {
    // non-JSON error body: keep the generic message
  }
  return new ApiError(response.status, message);
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.url(path));
    if (!response.ok) {
      throw await errorFrom(response);
    }
    return (await response.json()) as T;
  }

  async nextTask(
    campaignId: string,
    annotatorId: string,
  ): Promise<NextTaskResponse> {
    const query = new URLSearchParams({ annotator: annotatorId });
    return this.getJson(
      `/api/campaigns/${encodeURIComponent(campaignId)}/next?${query}`,
    );
  }

  async submitResponse(
    campaignId: string,
    submission: Submission,
  ): Promise<{ ok: boolean }> {
    const response = await this.fetchFn(
      this.url(`/api/campaigns/${encodeURIComponent(campaignId)}/responses`),
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(submission),
      },
    );
    if (!response.ok) {
      throw await errorFrom(response);
    }
    return (await response.json()) as { ok: boolean };
  }

  async progress(campaignId: string): Promise<Progress> {
    return this.getJson(
      `/api/campaigns/${encodeURIComponent(campaignId)}/progress`,
    );
  }

  async exportResponses(campaignId: string): Promise<string> {
    const response = await this.fetchFn(
      this.url(`/api/campaigns/${encodeURIComponent(campaignId)}/export`),
    );
    if (!response.ok) {
      throw await errorFrom(response);
    }
    return response.text();
  }
}
