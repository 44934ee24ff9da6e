/** Wire types mirroring the experiment service's JSON documents. */

export type ExperimentState = 'draft' | 'staged' | 'running' | 'complete' | 'failed';

export interface WeightsDoc {
  weight_acc: number;
  weight_size: number;
  weight_complexity: number;
  justification?: string;
  tradeoffs?: string;
}

export interface SuggestionDoc {
  profile: WeightsDoc;
  source: 'llm' | 'fallback';
  raw_responses: number[][];
}

export interface ExperimentRecord {
  id: string;
  state: ExperimentState;
  use_case: string;
  strategy: string;
  budget: number;
  weights: WeightsDoc | null;
  suggestions: SuggestionDoc[];
  report: ReportDoc | null;
  error: string | null;
  progress: { calls_spent: number; budget: number };
}

export interface RankedArmDoc {
  model_id: string;
  posterior_mean_reward: number;
  posterior_mean_accuracy: number;
  pulls: number;
  size_mb: number;
  complexity_mmac: number;
}

export interface ReportDoc {
  version: number;
  config_digest: string;
  ranking: RankedArmDoc[];
  selection_counts: Record<string, number>;
  eval_calls_used: number;
  mmacs_used: number;
  brute_force_equivalent_mmacs: number;
  mmac_savings: number;
  trace_ref: string | null;
}

export interface CreateExperimentBody {
  repository: unknown;
  manifest: unknown;
  zoo?: unknown;
  use_case: string;
  strategy: string;
  budget: number;
  seed?: number;
}

export interface WeightsPatchBody {
  weight_acc: number;
  weight_size: number;
  weight_complexity: number;
}
