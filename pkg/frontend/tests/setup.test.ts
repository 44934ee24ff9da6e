import { describe, expect, it } from 'vitest';
import { ApiClient } from '../src/api.js';
import { submitSetup, validateSetupForm, type SetupForm } from '../src/setup.js';

function validForm(overrides: Partial<SetupForm> = {}): SetupForm {
  return {
    repositoryText: JSON.stringify({
      version: 1,
      models: [{ id: 'm0', size_mb: 10, complexity_mmac: 100, benchmark_accuracy: 0.5 }],
    }),
    manifestText: JSON.stringify({ version: 1, name: 't', n_samples: 10, seed: 0 }),
    zooText: '',
    useCase: 'label photos from a field camera',
    strategy: 'thompson',
    budget: '50',
    seed: '0',
    ...overrides,
  };
}

describe('setup validation', () => {
  it('accepts a complete form', () => {
    const { body, errors } = validateSetupForm(validForm());
    expect(errors).toEqual({});
    expect(body?.use_case).toBe('label photos from a field camera');
    expect(body?.budget).toBe(50);
    expect(body?.zoo).toBeUndefined();
  });

  it('missing use case is an inline error and no request is sent', async () => {
    let fetched = 0;
    const api = new ApiClient('http://svc.test', async () => {
      fetched += 1;
      return new Response('{}', { status: 201 });
    });
    const result = await submitSetup(api, validForm({ useCase: '   ' }));
    expect(result.errors.useCase).toMatch(/use case/);
    expect(result.record).toBeUndefined();
    expect(fetched).toBe(0);
  });

  it('non-JSON repository is a field error', () => {
    const { errors } = validateSetupForm(validForm({ repositoryText: '{oops' }));
    expect(errors.repositoryText).toMatch(/JSON/);
  });

  it('budget must be a positive integer', () => {
    expect(validateSetupForm(validForm({ budget: '0' })).errors.budget).toBeDefined();
    expect(validateSetupForm(validForm({ budget: '12.5' })).errors.budget).toBeDefined();
    expect(validateSetupForm(validForm({ budget: 'lots' })).errors.budget).toBeDefined();
  });

  it('service failures surface as a banner-level error with no field errors', async () => {
    const api = new ApiClient('http://svc.test', async () => {
      throw new TypeError('fetch failed');
    });
    const result = await submitSetup(api, validForm());
    expect(result.record).toBeUndefined();
    expect(result.errors).toEqual({});
    expect(result.serviceError).toMatch(/fetch failed/);
  });

  it('400 responses surface the service detail', async () => {
    const api = new ApiClient(
      'http://svc.test',
      async () =>
        new Response(JSON.stringify({ detail: 'budget 5 is below the arm count 6' }), {
          status: 400,
        }),
    );
    const result = await submitSetup(api, validForm({ budget: '5' }));
    expect(result.serviceError).toMatch(/arm count/);
  });
});
