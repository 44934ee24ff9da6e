import { describe, expect, it } from 'vitest';
import { hashFor, parseHash, screenFor } from '../src/router.js';

describe('state-driven routing', () => {
  it('derives the screen purely from the record state', () => {
    expect(screenFor('draft')).toBe('staging');
    expect(screenFor('staged')).toBe('staging');
    expect(screenFor('running')).toBe('analysis');
    expect(screenFor('complete')).toBe('analysis');
    expect(screenFor('failed')).toBe('analysis');
  });

  it('round-trips hashes', () => {
    expect(parseHash('#/staging/abc')).toEqual({ screen: 'staging', experimentId: 'abc' });
    expect(parseHash('#/analysis/xyz')).toEqual({ screen: 'analysis', experimentId: 'xyz' });
    expect(parseHash('')).toEqual({ screen: 'setup', experimentId: null });
    expect(parseHash('#/nonsense')).toEqual({ screen: 'setup', experimentId: null });
    expect(hashFor({ screen: 'analysis', experimentId: 'xyz' })).toBe('#/analysis/xyz');
    expect(hashFor({ screen: 'setup', experimentId: null })).toBe('#/setup');
  });
});
