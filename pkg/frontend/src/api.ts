/** Thin typed client for the experiment service HTTP API. */

import type {
  CreateExperimentBody,
  ExperimentRecord,
  ReportDoc,
  WeightsPatchBody,
} from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { 'Content-Type': 'application/json' } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail =
        typeof payload === 'object' && payload !== null && 'detail' in payload
          ? String((payload as { detail: unknown }).detail)
          : `request failed with status ${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  health(): Promise<{ status: string }> {
    return this.request('GET', '/healthz');
  }

  createExperiment(body: CreateExperimentBody): Promise<ExperimentRecord> {
    return this.request('POST', '/experiments', body);
  }

  listExperiments(): Promise<ExperimentRecord[]> {
    return this.request('GET', '/experiments');
  }

  getExperiment(id: string): Promise<ExperimentRecord> {
    return this.request('GET', `/experiments/${id}`);
  }

  stageExperiment(id: string): Promise<ExperimentRecord> {
    return this.request('POST', `/experiments/${id}/stage`);
  }

  patchWeights(id: string, weights: WeightsPatchBody): Promise<ExperimentRecord> {
    return this.request('PATCH', `/experiments/${id}/weights`, weights);
  }

  runExperiment(id: string): Promise<ExperimentRecord> {
    return this.request('POST', `/experiments/${id}/run`);
  }

  getReport(id: string): Promise<ReportDoc> {
    return this.request('GET', `/experiments/${id}/report`);
  }
}
