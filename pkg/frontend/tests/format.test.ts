import { describe, expect, it } from 'vitest';
import { formatAccuracy, formatMmacs, formatWeight } from '../src/format.js';

describe('fixed-decimal formatting', () => {
  it('weights render at two decimals', () => {
    expect(formatWeight(0.63)).toBe('0.63');
    expect(formatWeight(0.5)).toBe('0.50');
    expect(formatWeight(1)).toBe('1.00');
  });

  it('accuracies render at two decimals', () => {
    expect(formatAccuracy(0.2857142857)).toBe('0.29');
    expect(formatAccuracy(0)).toBe('0.00');
  });

  it('mmac figures use thousands separators', () => {
    expect(formatMmacs(0)).toBe('0');
    expect(formatMmacs(999)).toBe('999');
    expect(formatMmacs(1000)).toBe('1,000');
    expect(formatMmacs(580500)).toBe('580,500');
    expect(formatMmacs(127750.4)).toBe('127,750');
    expect(formatMmacs(1234567.89)).toBe('1,234,568');
    expect(formatMmacs(-4470)).toBe('-4,470');
  });
});
