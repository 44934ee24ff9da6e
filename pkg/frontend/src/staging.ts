/** Staging screen logic: weight sliders over the suggested profile.
 *
 * The dirty flag tracks edits against the last server-acknowledged weights
 * (initially the suggestion). Saving patches the service and clears the flag
 * on ack; running always flushes unsaved edits first so no update is lost.
 */

import type { ApiClient } from './api.js';
import type { ExperimentRecord, WeightsDoc } from './types.js';

export type SliderName = 'weight_acc' | 'weight_size' | 'weight_complexity';

export const SLIDER_STEP = 0.01;

export interface SliderTriple {
  weight_acc: number;
  weight_size: number;
  weight_complexity: number;
}

export interface StagingViewModel {
  experimentId: string;
  suggested: SliderTriple;
  edited: SliderTriple;
  justification: string;
  tradeoffs: string;
  dirty: boolean;
  budget: number;
}

function clamp01(value: number): number {
  return Math.min(1, Math.max(0, value));
}

function tripleOf(weights: WeightsDoc): SliderTriple {
  return {
    weight_acc: weights.weight_acc,
    weight_size: weights.weight_size,
    weight_complexity: weights.weight_complexity,
  };
}

function triplesEqual(a: SliderTriple, b: SliderTriple): boolean {
  return (
    a.weight_acc === b.weight_acc &&
    a.weight_size === b.weight_size &&
    a.weight_complexity === b.weight_complexity
  );
}

export class StagingController {
  private model: StagingViewModel | null = null;
  private saved: SliderTriple | null = null;
  private pending = false;

  constructor(
    private readonly api: ApiClient,
    private readonly experimentId: string,
  ) {}

  get viewModel(): StagingViewModel {
    if (!this.model) throw new Error('staging screen not loaded');
    return this.model;
  }

  /** Load the record; a draft is staged first so sliders have a suggestion. */
  async load(): Promise<StagingViewModel> {
    let record = await this.api.getExperiment(this.experimentId);
    if (record.state === 'draft') {
      record = await this.api.stageExperiment(this.experimentId);
    }
    if (record.state !== 'staged') {
      throw new Error(`experiment is ${record.state}; staging needs a staged record`);
    }
    return this.adopt(record);
  }

  private adopt(record: ExperimentRecord): StagingViewModel {
    const suggestion = record.suggestions[record.suggestions.length - 1];
    if (!record.weights || !suggestion) {
      throw new Error('staged record carries no weights');
    }
    this.saved = tripleOf(record.weights);
    this.model = {
      experimentId: record.id,
      suggested: tripleOf(suggestion.profile),
      edited: tripleOf(record.weights),
      justification: suggestion.profile.justification ?? '',
      tradeoffs: suggestion.profile.tradeoffs ?? '',
      dirty: false,
      budget: record.budget,
    };
    return this.model;
  }

  /** Slider edit; values clamp to [0, 1] and snap to the 0.01 step.
   * Snapping rounds via x100 so snapped values serialize cleanly (0.9, not
   * 0.9000000000000001). */
  setSlider(name: SliderName, value: number): StagingViewModel {
    const model = this.viewModel;
    const snapped = clamp01(Math.round(value * 100) / 100);
    model.edited = { ...model.edited, [name]: snapped };
    model.dirty = !triplesEqual(model.edited, this.saved!);
    return model;
  }

  /** PATCH the edited weights; the dirty flag clears on acknowledgement. */
  async save(): Promise<StagingViewModel> {
    const model = this.viewModel;
    if (this.pending) throw new Error('a mutation is already in flight');
    this.pending = true;
    try {
      const record = await this.api.patchWeights(model.experimentId, model.edited);
      this.saved = tripleOf(record.weights!);
      model.edited = tripleOf(record.weights!);
      model.dirty = false;
      return model;
    } finally {
      this.pending = false;
    }
  }

  /** Start the run, flushing unsaved slider edits first (no lost updates). */
  async run(): Promise<ExperimentRecord> {
    const model = this.viewModel;
    if (model.dirty) {
      await this.save();
    }
    return this.api.runExperiment(model.experimentId);
  }
}
