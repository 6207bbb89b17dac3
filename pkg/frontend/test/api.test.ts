import { describe, expect, it } from 'vitest';

import { ServiceError, SessionApi } from '../src/api.js';
import { pointEvent } from '../src/events.js';

interface Call {
  url: string;
  init?: RequestInit;
}

function fakeFetch(routes: Record<string, { status: number; body: unknown }>) {
  const calls: Call[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const key = `${init?.method ?? 'GET'} ${url}`;
    const route = routes[key];
    if (!route) {
      throw new Error(`no fake route for ${key}`);
    }
    return new Response(JSON.stringify(route.body), {
      status: route.status,
      headers: { 'Content-Type': 'application/json' },
    });
  };
  return { impl, calls };
}

describe('SessionApi', () => {
  it('creates sessions and posts events as JSON arrays', async () => {
    const { impl, calls } = fakeFetch({
      'POST http://svc/sessions': {
        status: 201,
        body: { schema_version: '1', session: 's9', resolver: 'greedy' },
      },
      'POST http://svc/sessions/s9/events': {
        status: 200,
        body: { schema_version: '1', accepted: 1, turns_finalized: [1] },
      },
    });
    const api = new SessionApi('http://svc', impl);
    const session = await api.createSession({ resolver: 'greedy' });
    expect(session).toBe('s9');
    const finalized = await api.postEvents(session, [pointEvent([1, 2], 0)]);
    expect(finalized).toEqual([1]);
    const sent = JSON.parse(String(calls[1].init?.body));
    expect(Array.isArray(sent)).toBe(true);
    expect(sent[0].kind).toBe('gesture');
  });

  it('builds resolution queries with turn and ablate parameters', async () => {
    const body = {
      schema_version: '1', session: 's9', turn: 1, turn_count: 1, category: null,
      result: { assignments: {}, unresolved: [], reasons: {}, flags: {} },
      focus: [], vectors: null, breakdown: [],
    };
    const { impl, calls } = fakeFetch({
      'GET http://svc/sessions/s9/resolution?turn=latest': { status: 200, body },
      'GET http://svc/sessions/s9/resolution?turn=2&ablate=true': { status: 200, body },
    });
    const api = new SessionApi('http://svc', impl);
    await api.resolution('s9');
    await api.resolution('s9', { turn: 2, ablate: true });
    expect(calls.map((c) => c.url)).toEqual([
      'http://svc/sessions/s9/resolution?turn=latest',
      'http://svc/sessions/s9/resolution?turn=2&ablate=true',
    ]);
  });

  it('raises ServiceError with the server-reported code', async () => {
    const { impl } = fakeFetch({
      'GET http://svc/sessions/nope/resolution?turn=latest': {
        status: 404,
        body: { schema_version: '1', error: 'unknown-session', detail: 'nope' },
      },
    });
    const api = new SessionApi('http://svc', impl);
    await expect(api.resolution('nope')).rejects.toMatchObject({
      status: 404,
      code: 'unknown-session',
    });
    await expect(api.resolution('nope')).rejects.toBeInstanceOf(ServiceError);
  });
});
