import { describe, expect, it } from 'vitest';
import { ApiClient, ApiError } from '../src/api.js';

describe('api client', () => {
  it('serializes bodies and joins paths onto the base url', async () => {
    let seen: { url: string; method?: string; body?: string } | null = null;
    const api = new ApiClient('http://svc.test', async (url, init) => {
      seen = { url, method: init?.method, body: init?.body as string };
      return new Response('{"id": "a", "state": "draft"}', { status: 201 });
    });
    await api.createExperiment({
      repository: {},
      manifest: {},
      use_case: 'u',
      strategy: 'thompson',
      budget: 10,
    });
    expect(seen!.url).toBe('http://svc.test/experiments');
    expect(seen!.method).toBe('POST');
    expect(JSON.parse(seen!.body!).budget).toBe(10);
  });

  it('raises ApiError carrying the service detail and status', async () => {
    const api = new ApiClient(
      'http://svc.test',
      async () => new Response(JSON.stringify({ detail: 'no experiment' }), { status: 404 }),
    );
    const error = await api.getExperiment('ghost').catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(404);
    expect(error.message).toBe('no experiment');
  });

  it('falls back to a generic message when the body is not json', async () => {
    const api = new ApiClient(
      'http://svc.test',
      async () => new Response('<html>bad gateway</html>', { status: 502 }),
    );
    const error = await api.health().catch((e) => e);
    expect(error.status).toBe(502);
    expect(error.message).toMatch(/502/);
  });
});
