// Thin client for the session service; the console does no scoring of its
// own, every number shown comes from these responses.

import type { EventRecord, ResolutionResponse, SceneDoc } from './types.js';

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: unknown,
  ) {
    super(`service error ${status} (${code}): ${JSON.stringify(detail)}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class SessionApi {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ServiceError(response.status, body.error ?? 'unknown', body.detail);
    }
    return body as T;
  }

  async scene(): Promise<SceneDoc> {
    const body = await this.request<{ scene: SceneDoc }>('/scene');
    return body.scene;
  }

  async createSession(options: Record<string, unknown> = {}): Promise<string> {
    const body = await this.request<{ session: string }>('/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(options),
    });
    return body.session;
  }

  async postEvents(session: string, records: EventRecord[]): Promise<number[]> {
    const body = await this.request<{ turns_finalized: number[] }>(
      `/sessions/${session}/events`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(records),
      },
    );
    return body.turns_finalized;
  }

  async resolution(
    session: string,
    options: { turn?: number | 'latest'; ablate?: boolean } = {},
  ): Promise<ResolutionResponse> {
    const params = new URLSearchParams();
    params.set('turn', String(options.turn ?? 'latest'));
    if (options.ablate) {
      params.set('ablate', 'true');
    }
    return this.request<ResolutionResponse>(
      `/sessions/${session}/resolution?${params.toString()}`,
    );
  }
}
