/** Setup screen: validate the form locally, then create the experiment.
 * Field errors never leave the browser; only a fully valid form is posted. */

import type { ApiClient } from './api.js';
import type { CreateExperimentBody, ExperimentRecord } from './types.js';

export interface SetupForm {
  repositoryText: string;
  manifestText: string;
  zooText: string; // optional; empty means "use the external evaluation service"
  useCase: string;
  strategy: string;
  budget: string;
  seed: string;
}

export type FieldErrors = Partial<Record<keyof SetupForm, string>>;

const STRATEGIES = ['epsilon_greedy', 'ucb', 'thompson'];

function parseJsonField(text: string, label: string, errors: FieldErrors, key: keyof SetupForm) {
  try {
    return JSON.parse(text);
  } catch {
    errors[key] = `${label} is not valid JSON`;
    return undefined;
  }
}

export function validateSetupForm(form: SetupForm): { body?: CreateExperimentBody; errors: FieldErrors } {
  const errors: FieldErrors = {};

  if (!form.repositoryText.trim()) errors.repositoryText = 'a repository file is required';
  if (!form.manifestText.trim()) errors.manifestText = 'a dataset manifest is required';
  if (!form.useCase.trim()) errors.useCase = 'describe the use case in plain text';
  if (!STRATEGIES.includes(form.strategy)) errors.strategy = 'pick a selection strategy';

  const budget = Number(form.budget);
  if (!Number.isInteger(budget) || budget < 1) errors.budget = 'budget must be a positive integer';

  const seed = form.seed.trim() === '' ? 0 : Number(form.seed);
  if (!Number.isInteger(seed) || seed < 0) errors.seed = 'seed must be a non-negative integer';

  if (Object.keys(errors).length > 0) return { errors };

  const repository = parseJsonField(form.repositoryText, 'repository', errors, 'repositoryText');
  const manifest = parseJsonField(form.manifestText, 'manifest', errors, 'manifestText');
  const zoo = form.zooText.trim()
    ? parseJsonField(form.zooText, 'zoo spec', errors, 'zooText')
    : undefined;
  if (Object.keys(errors).length > 0) return { errors };

  const body: CreateExperimentBody = {
    repository,
    manifest,
    use_case: form.useCase.trim(),
    strategy: form.strategy,
    budget,
    seed,
  };
  if (zoo !== undefined) body.zoo = zoo;
  return { body, errors: {} };
}

export async function submitSetup(
  api: ApiClient,
  form: SetupForm,
): Promise<{ record?: ExperimentRecord; errors: FieldErrors; serviceError?: string }> {
  const { body, errors } = validateSetupForm(form);
  if (!body) return { errors }; // no request is sent for an invalid form
  try {
    return { record: await api.createExperiment(body), errors: {} };
  } catch (error) {
    return { errors: {}, serviceError: error instanceof Error ? error.message : String(error) };
  }
}
