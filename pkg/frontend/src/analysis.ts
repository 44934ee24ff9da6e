/** Result-analysis view model: top-3 cards, selection-count bars, savings.
 *
 * Render-only contract: every value is copied from the service report and at
 * most formatted; no rewards, rankings, or savings are recomputed here.
 */

import { formatAccuracy, formatMmacs, formatReward, formatWeight } from './format.js';
import type { ReportDoc } from './types.js';

export interface TopModelCard {
  rank: number;
  modelId: string;
  accuracyText: string;
  rewardText: string;
  pulls: number;
  sizeText: string;
  complexityText: string;
}

export interface SelectionBar {
  modelId: string;
  pulls: number;
  /** Bar length as a fraction of the most-pulled arm (presentation only). */
  fraction: number;
}

export interface RankingRow {
  rank: number;
  modelId: string;
  rewardText: string;
  accuracyText: string;
  pulls: number;
  sizeMb: number;
  complexityMmac: number;
}

export interface ResultsViewModel {
  topCards: TopModelCard[];
  bars: SelectionBar[];
  barTotal: number;
  ranking: RankingRow[];
  savings: number;
  savingsText: string;
  mmacsUsedText: string;
  bruteForceEquivalentText: string;
  evalCallsUsed: number;
  budget: number | null;
}

export function buildResultsViewModel(report: ReportDoc, budget: number | null = null): ResultsViewModel {
  const topCards = report.ranking.slice(0, 3).map((row, index) => ({
    rank: index + 1,
    modelId: row.model_id,
    accuracyText: formatAccuracy(row.posterior_mean_accuracy),
    rewardText: formatReward(row.posterior_mean_reward),
    pulls: row.pulls,
    sizeText: `${row.size_mb} MB`,
    complexityText: `${formatMmacs(row.complexity_mmac)} MMAC`,
  }));

  const counts = Object.entries(report.selection_counts);
  const largest = counts.reduce((top, [, pulls]) => Math.max(top, pulls), 0);
  const bars = counts.map(([modelId, pulls]) => ({
    modelId,
    pulls,
    fraction: largest > 0 ? pulls / largest : 0,
  }));
  const barTotal = counts.reduce((total, [, pulls]) => total + pulls, 0);

  const ranking = report.ranking.map((row, index) => ({
    rank: index + 1,
    modelId: row.model_id,
    rewardText: formatReward(row.posterior_mean_reward),
    accuracyText: formatAccuracy(row.posterior_mean_accuracy),
    pulls: row.pulls,
    sizeMb: row.size_mb,
    complexityMmac: row.complexity_mmac,
  }));

  return {
    topCards,
    bars,
    barTotal,
    ranking,
    savings: report.mmac_savings,
    savingsText: `${formatMmacs(report.mmac_savings)} MMAC`,
    mmacsUsedText: `${formatMmacs(report.mmacs_used)} MMAC`,
    bruteForceEquivalentText: `${formatMmacs(report.brute_force_equivalent_mmacs)} MMAC`,
    evalCallsUsed: report.eval_calls_used,
    budget,
  };
}

/** Staging sliders show two decimals; reused by the analysis weights echo. */
export function weightsLine(weights: { weight_acc: number; weight_size: number; weight_complexity: number }): string {
  return (
    `accuracy ${formatWeight(weights.weight_acc)} / ` +
    `size ${formatWeight(weights.weight_size)} / ` +
    `complexity ${formatWeight(weights.weight_complexity)}`
  );
}
