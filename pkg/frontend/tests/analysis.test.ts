/** Analysis rendering against a fixed report fixture: chart totals equal the
 * metered calls, top-3 cards follow the ranking, savings verbatim. */

import { describe, expect, it } from 'vitest';
import { readFileSync } from 'node:fs';
import { buildResultsViewModel } from '../src/analysis.js';
import { formatMmacs } from '../src/format.js';
import { renderAnalysis, rankingCsv } from '../src/render.js';
import type { ReportDoc } from '../src/types.js';

const REPORT: ReportDoc = JSON.parse(
  readFileSync(new URL('./fixtures/report.json', import.meta.url), 'utf-8'),
);

describe('results view model', () => {
  it('selection-count bars sum to eval_calls_used', () => {
    const model = buildResultsViewModel(REPORT);
    const total = model.bars.reduce((sum, bar) => sum + bar.pulls, 0);
    expect(total).toBe(REPORT.eval_calls_used);
    expect(model.barTotal).toBe(REPORT.eval_calls_used);
  });

  it('top-3 cards match the ranking order', () => {
    const model = buildResultsViewModel(REPORT);
    expect(model.topCards.length).toBe(Math.min(3, REPORT.ranking.length));
    model.topCards.forEach((card, index) => {
      expect(card.modelId).toBe(REPORT.ranking[index].model_id);
      expect(card.rank).toBe(index + 1);
      expect(card.pulls).toBe(REPORT.ranking[index].pulls);
    });
  });

  it('savings figure is the report value verbatim', () => {
    const model = buildResultsViewModel(REPORT);
    expect(model.savings).toBe(REPORT.mmac_savings);
    expect(model.savingsText).toBe(`${formatMmacs(REPORT.mmac_savings)} MMAC`);
  });

  it('never recomputes domain values: every bar and row copies the report', () => {
    const model = buildResultsViewModel(REPORT);
    for (const bar of model.bars) {
      expect(bar.pulls).toBe(REPORT.selection_counts[bar.modelId]);
    }
    model.ranking.forEach((row, index) => {
      expect(row.modelId).toBe(REPORT.ranking[index].model_id);
      expect(row.pulls).toBe(REPORT.ranking[index].pulls);
      expect(row.sizeMb).toBe(REPORT.ranking[index].size_mb);
    });
    expect(model.evalCallsUsed).toBe(REPORT.eval_calls_used);
  });

  it('a two-arm experiment yields two cards (min of 3 and arm count)', () => {
    const twoArm: ReportDoc = {
      ...REPORT,
      ranking: REPORT.ranking.slice(0, 2),
      selection_counts: Object.fromEntries(
        REPORT.ranking.slice(0, 2).map((row) => [row.model_id, row.pulls]),
      ),
    };
    const model = buildResultsViewModel(twoArm);
    expect(model.topCards.length).toBe(2);
  });

  it('bar fractions are presentation-only and bounded', () => {
    const model = buildResultsViewModel(REPORT);
    for (const bar of model.bars) {
      expect(bar.fraction).toBeGreaterThanOrEqual(0);
      expect(bar.fraction).toBeLessThanOrEqual(1);
    }
    expect(Math.max(...model.bars.map((bar) => bar.fraction))).toBe(1);
  });
});

describe('analysis rendering', () => {
  it('renders one bar per arm with the pulls annotated', () => {
    const html = renderAnalysis(buildResultsViewModel(REPORT));
    const barMatches = html.match(/data-pulls="(\d+)"/g) ?? [];
    expect(barMatches.length).toBe(Object.keys(REPORT.selection_counts).length);
    const rendered = barMatches.map((m) => Number(m.match(/\d+/)![0]));
    expect(rendered.reduce((a, b) => a + b, 0)).toBe(REPORT.eval_calls_used);
  });

  it('renders the savings text verbatim in the summary', () => {
    const html = renderAnalysis(buildResultsViewModel(REPORT));
    expect(html).toContain(`id="savings">${formatMmacs(REPORT.mmac_savings)} MMAC<`);
  });

  it('renders a ranking row per arm plus a header', () => {
    const html = renderAnalysis(buildResultsViewModel(REPORT));
    const rows = html.match(/<tr><td>/g) ?? [];
    expect(rows.length).toBe(REPORT.ranking.length);
  });

  it('csv export has the fixed column order and one line per arm', () => {
    const csv = rankingCsv(buildResultsViewModel(REPORT), 'thompson');
    const lines = csv.trim().split('\n');
    expect(lines[0]).toBe('method,model,accuracy,size_mb,complexity_mmac,eval_calls');
    expect(lines.length).toBe(1 + REPORT.ranking.length);
    expect(lines[1].startsWith(`thompson,${REPORT.ranking[0].model_id},`)).toBe(true);
  });
});
